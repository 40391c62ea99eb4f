#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace vqansr::toml {

// Small TOML reader covering what run configs need: comments, [section]
// headers, and key = value lines with strings, integers, floats, booleans,
// and single-line arrays of those. No nested tables, no multi-line strings.

struct Value;
using Array = std::vector<Value>;

struct Value {
    std::variant<bool, long long, double, std::string, Array> data;

    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_array() const { return std::holds_alternative<Array>(data); }

    bool as_bool() const { return std::get<bool>(data); }
    long long as_int() const { return std::get<long long>(data); }
    double as_double() const {
        if (std::holds_alternative<long long>(data))
            return static_cast<double>(std::get<long long>(data));
        return std::get<double>(data);
    }
    const std::string& as_string() const { return std::get<std::string>(data); }
    const Array& as_array() const { return std::get<Array>(data); }
};

using Table = std::map<std::string, Value>;
using Document = std::map<std::string, Table>;

class toml_error : public std::runtime_error {
  public:
    toml_error(const std::string& msg, int line)
        : std::runtime_error("toml, line " + std::to_string(line) + ": " + msg) {}
};

namespace detail {

inline void skip_ws(const std::string& s, std::size_t& i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline Value parse_value(const std::string& s, std::size_t& i, int line);

inline Value parse_scalar(const std::string& s, std::size_t& i, int line) {
    if (s[i] == '"') {
        std::string out;
        ++i;
        while (i < s.size() && s[i] != '"') {
            if (s[i] == '\\') {
                ++i;
                if (i >= s.size()) throw toml_error("dangling escape", line);
                switch (s[i]) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    default: throw toml_error("unsupported escape", line);
                }
            } else {
                out += s[i];
            }
            ++i;
        }
        if (i >= s.size()) throw toml_error("unterminated string", line);
        ++i;
        return Value{out};
    }
    if (s.compare(i, 4, "true") == 0) {
        i += 4;
        return Value{true};
    }
    if (s.compare(i, 5, "false") == 0) {
        i += 5;
        return Value{false};
    }
    std::size_t j = i;
    bool is_float = false;
    if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
    while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.' ||
                            s[j] == 'e' || s[j] == 'E' || s[j] == '+' || s[j] == '-' ||
                            s[j] == '_')) {
        if (s[j] == '.' || s[j] == 'e' || s[j] == 'E') is_float = true;
        ++j;
    }
    if (j == i) throw toml_error("expected a value", line);
    std::string num = s.substr(i, j - i);
    num.erase(std::remove(num.begin(), num.end(), '_'), num.end());
    i = j;
    try {
        if (is_float) return Value{std::stod(num)};
        return Value{static_cast<long long>(std::stoll(num))};
    } catch (const std::exception&) {
        throw toml_error("malformed number: " + num, line);
    }
}

inline Value parse_value(const std::string& s, std::size_t& i, int line) {
    skip_ws(s, i);
    if (i >= s.size()) throw toml_error("missing value", line);
    if (s[i] != '[') return parse_scalar(s, i, line);
    ++i;
    Array arr;
    skip_ws(s, i);
    if (i < s.size() && s[i] == ']') {
        ++i;
        return Value{arr};
    }
    for (;;) {
        skip_ws(s, i);
        arr.push_back(parse_value(s, i, line));
        skip_ws(s, i);
        if (i < s.size() && s[i] == ',') {
            ++i;
            continue;
        }
        if (i < s.size() && s[i] == ']') {
            ++i;
            return Value{arr};
        }
        throw toml_error("expected ',' or ']' in array", line);
    }
}

inline std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace detail

inline Document parse(const std::string& text) {
    Document doc;
    std::string section;  // keys before any header land in ""
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = detail::trim(detail::strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw toml_error("unterminated section header", lineno);
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw toml_error("empty section name", lineno);
            doc[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw toml_error("expected key = value", lineno);
        const std::string key = detail::trim(line.substr(0, eq));
        if (key.empty()) throw toml_error("empty key", lineno);
        std::size_t i = eq + 1;
        const Value v = detail::parse_value(line, i, lineno);
        detail::skip_ws(line, i);
        if (i != line.size()) throw toml_error("trailing characters after value", lineno);
        doc[section][key] = v;
    }
    return doc;
}

inline Document parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace vqansr::toml
