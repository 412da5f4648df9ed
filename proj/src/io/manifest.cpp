#include "ddecay/io/manifest.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ddecay/errors.hpp"

namespace dd {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

bool Manifest::has(const std::string& key) const { return values.count(key) > 0; }

std::string Manifest::get(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double Manifest::get_double(const std::string& key, double fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw DomainError("manifest: '" + key + "' is not a number: " + it->second);
    }
}

void Manifest::set(const std::string& key, const std::string& value) { values[key] = value; }

std::string Manifest::to_text() const {
    std::string out, section = "\x01";
    for (const auto& [k, v] : values) {
        const auto dot = k.find('.');
        const std::string sec = dot == std::string::npos ? "" : k.substr(0, dot);
        const std::string key = dot == std::string::npos ? k : k.substr(dot + 1);
        if (sec != section) {
            if (!sec.empty()) out += "[" + sec + "]\n";
            section = sec;
        }
        out += key + " = " + v + "\n";
    }
    return out;
}

std::string Manifest::parameter_hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : to_text()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Manifest parse_manifest(const std::string& text) {
    Manifest m;
    std::istringstream in(text);
    std::string line, section;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw DomainError("manifest line " + std::to_string(no) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DomainError("manifest line " + std::to_string(no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key.empty()) throw DomainError("manifest line " + std::to_string(no) + ": empty key");
        m.set(section.empty() ? key : section + "." + key, val);
    }
    return m;
}

Manifest load_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot open manifest " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_manifest(ss.str());
}

}  // namespace dd
