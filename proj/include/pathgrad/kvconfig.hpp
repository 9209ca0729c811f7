#pragma once

#include <map>
#include <string>
#include <vector>

namespace pathgrad {

/// Plain-text config: one `key = value` per line, '#' starts a comment,
/// blank lines ignored. Later duplicate keys win.
std::map<std::string, std::string> load_kv_file(const std::string& path);
std::map<std::string, std::string> parse_kv_text(const std::string& text,
                                                 const std::string& origin);

/// Required lookup; throws ValidationError naming the missing key.
const std::string& kv_get(const std::map<std::string, std::string>& kv,
                          const std::string& key);

std::string trim(const std::string& s);

/// Comma- and/or whitespace-separated list of reals.
std::vector<double> parse_reals(const std::string& text);
double parse_real(const std::string& text);
long parse_long(const std::string& text);

}  // namespace pathgrad
