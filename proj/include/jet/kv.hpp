#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace jet {

/**
 * @brief Flat key-value text file: one `key = value` per line, `#` comments.
 *
 * Used for engine presets, identified-model files, observer configs and
 * fit reports. Keys keep their insertion order on save so files stay
 * human-diffable.
 */
class KvFile {
public:
    KvFile() = default;

    static KvFile load(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("cannot open key-value file: " + path);
        KvFile kv;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string s = strip(line);
            if (s.empty() || s[0] == '#') continue;
            auto eq = s.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                            ": expected 'key = value', got '" + s + "'");
            std::string key = strip(s.substr(0, eq));
            std::string val = strip(s.substr(eq + 1));
            if (key.empty())
                throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": empty key");
            kv.set(key, val);
        }
        return kv;
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out)
            throw std::invalid_argument("cannot write key-value file: " + path);
        out << serialize();
    }

    std::string serialize() const {
        std::ostringstream os;
        for (const auto& k : order_) os << k << " = " << values_.at(k) << "\n";
        return os.str();
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    const std::string& get_string(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end())
            throw std::invalid_argument("missing key: " + key);
        return it->second;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key) const { return to_double(key, get_string(key)); }

    double get_double(const std::string& key, double fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : to_double(key, it->second);
    }

    long get_long(const std::string& key, long fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            std::size_t pos = 0;
            long v = std::stol(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("key '" + key + "': not an integer: " + it->second);
        }
    }

    bool get_bool(const std::string& key, bool fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        const std::string& v = it->second;
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw std::invalid_argument("key '" + key + "': not a boolean: " + v);
    }

    void set(const std::string& key, const std::string& value) {
        if (!values_.count(key)) order_.push_back(key);
        values_[key] = value;
    }

    void set(const std::string& key, double value) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.12g", value);
        set(key, std::string(buf));
    }

    void set(const std::string& key, long value) { set(key, std::to_string(value)); }

    const std::vector<std::string>& keys() const { return order_; }

    /// Keys of the form `prefix.<index>.suffix`; returns the number of
    /// consecutive indices starting at 0.
    int count_indexed(const std::string& prefix) const {
        int n = 0;
        while (true) {
            std::string probe = prefix + "." + std::to_string(n) + ".";
            bool found = false;
            for (const auto& k : order_)
                if (k.rfind(probe, 0) == 0) { found = true; break; }
            if (!found) break;
            ++n;
        }
        return n;
    }

private:
    static std::string strip(const std::string& s) {
        std::size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }

    static double to_double(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return d;
        } catch (const std::exception&) {
            throw std::invalid_argument("key '" + key + "': not a number: " + v);
        }
    }

    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;
};

} // namespace jet
