#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pathgrad {

/// 17 significant digits: enough to reproduce any double bit-exactly, so CSV
/// and JSON outputs are byte-identical across runs with the same seed.
std::string fmt17(double v);

/// Minimal streaming JSON writer. Hand-rolled so that floating-point fields
/// go through fmt17 (library writers emit shortest-round-trip forms).
class JsonWriter {
public:
    std::string str() const { return out_; }

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(double v);
    JsonWriter& value(long v);
    JsonWriter& value(std::uint64_t v);
    JsonWriter& value(bool v);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v) { return value(std::string(v)); }
    JsonWriter& value(const std::vector<double>& v);

    template <typename T>
    JsonWriter& kv(const std::string& k, const T& v) {
        key(k);
        return value(v);
    }

private:
    void comma();
    static std::string escape(const std::string& s);

    std::string out_;
    std::vector<bool> needs_comma_;
    bool after_key_ = false;
};

}  // namespace pathgrad
