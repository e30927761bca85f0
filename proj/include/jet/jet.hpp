#pragma once

// Umbrella header: grey-box turbojet modeling and thrust estimation.

#include "jet/csv.hpp"
#include "jet/ekf.hpp"
#include "jet/engine.hpp"
#include "jet/errors.hpp"
#include "jet/kv.hpp"
#include "jet/metrics.hpp"
#include "jet/observer.hpp"
#include "jet/pipeline.hpp"
#include "jet/plant.hpp"
#include "jet/refine.hpp"
#include "jet/regress.hpp"
#include "jet/savitzky_golay.hpp"
#include "jet/signals.hpp"
#include "jet/sindy.hpp"
#include "jet/spline.hpp"
#include "jet/timeseries.hpp"
