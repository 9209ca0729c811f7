#include "pathgrad/kvconfig.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pathgrad/errors.hpp"

namespace pathgrad {

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    const auto a = s.find_first_not_of(ws);
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(ws);
    return s.substr(a, b - a + 1);
}

std::map<std::string, std::string> parse_kv_text(const std::string& text,
                                                 const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(origin + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ValidationError(origin + ":" + std::to_string(lineno) + ": empty key");
        }
        kv[key] = value;
    }
    return kv;
}

std::map<std::string, std::string> load_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_kv_text(buf.str(), path);
}

const std::string& kv_get(const std::map<std::string, std::string>& kv,
                          const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ValidationError("config is missing required key '" + key + "'");
    return it->second;
}

double parse_real(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw ValidationError("expected a number, got empty string");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (errno != 0 || end != t.c_str() + t.size()) {
        throw ValidationError("cannot parse '" + t + "' as a number");
    }
    return v;
}

long parse_long(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw ValidationError("expected an integer, got empty string");
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (errno != 0 || end != t.c_str() + t.size()) {
        throw ValidationError("cannot parse '" + t + "' as an integer");
    }
    return v;
}

std::vector<double> parse_reals(const std::string& text) {
    std::vector<double> out;
    std::string token;
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!token.empty()) {
                out.push_back(parse_real(token));
                token.clear();
            }
        } else {
            token += c;
        }
    }
    if (!token.empty()) out.push_back(parse_real(token));
    return out;
}

}  // namespace pathgrad
