#pragma once

#include <map>
#include <string>

namespace dd {

// Flat key = value text with [section] headers; '#' starts a comment. Keys are stored as
// "section.key" ("key" before the first header).
struct Manifest {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback = "") const;
    double get_double(const std::string& key, double fallback) const;  // DomainError on a bad number
    void set(const std::string& key, const std::string& value);

    // canonical text: sorted sections and keys
    std::string to_text() const;
    // FNV-1a 64 over to_text(), hex
    std::string parameter_hash() const;
};

// throws DomainError with the line number on malformed input
Manifest parse_manifest(const std::string& text);
Manifest load_manifest(const std::string& path);

#ifndef DDECAY_VERSION
#define DDECAY_VERSION "0.0.0"
#endif
inline constexpr const char* kToolVersion = "ddecay " DDECAY_VERSION;

}  // namespace dd
