#include <charconv>
#include <sstream>

#include "cshell/config.hpp"
#include "cshell/errors.hpp"

namespace cshell {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Drops a trailing '#' comment that is not inside a string.
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && in_str) {
            ++i;
            continue;
        }
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

double parse_number(const std::string& tok, int line) {
    std::string t;
    for (char c : tok)
        if (c != '_') t += c;
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    double v = 0.0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size())
        throw ConfigError("line " + std::to_string(line) + ": cannot parse number '" + tok + "'");
    return v;
}

std::string parse_string(const std::string& tok, int line) {
    if (tok.size() < 2 || tok.front() != '"' || tok.back() != '"')
        throw ConfigError("line " + std::to_string(line) + ": malformed string " + tok);
    std::string out;
    for (size_t i = 1; i + 1 < tok.size(); ++i) {
        if (tok[i] == '\\' && i + 2 < tok.size()) {
            const char n = tok[++i];
            out += n == 'n' ? '\n' : n == 't' ? '\t' : n;
        } else {
            out += tok[i];
        }
    }
    return out;
}

std::vector<std::string> split_array(const std::string& body) {
    std::vector<std::string> items;
    std::string cur;
    bool in_str = false;
    for (size_t i = 0; i < body.size(); ++i) {
        const char c = body[i];
        if (c == '\\' && in_str && i + 1 < body.size()) {
            cur += c;
            cur += body[++i];
            continue;
        }
        if (c == '"') in_str = !in_str;
        if (c == ',' && !in_str) {
            items.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) items.push_back(trim(cur));
    return items;
}

TomlValue parse_value(const std::string& raw, int line) {
    const std::string v = trim(raw);
    if (v.empty()) throw ConfigError("line " + std::to_string(line) + ": missing value");
    if (v == "true") return true;
    if (v == "false") return false;
    if (v.front() == '"') return parse_string(v, line);
    if (v.front() == '[') {
        if (v.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unterminated array");
        const auto items = split_array(v.substr(1, v.size() - 2));
        if (!items.empty() && items.front().front() == '"') {
            std::vector<std::string> out;
            for (const auto& it : items) out.push_back(parse_string(it, line));
            return out;
        }
        std::vector<double> out;
        for (const auto& it : items) out.push_back(parse_number(it, line));
        return out;
    }
    return parse_number(v, line);
}

std::string format_number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, r.ptr);
    // keep floats recognisable as floats
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

}  // namespace

TomlDoc parse_toml(const std::string& text) {
    TomlDoc doc;
    std::string table;
    doc[table];
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::string pending;
    int pending_line = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(strip_comment(line));
        if (!pending.empty()) {
            pending += " " + s;
            if (s.find(']') == std::string::npos) continue;
            s = pending;
            pending.clear();
        }
        if (s.empty()) continue;
        if (s.front() == '[' && s.find('=') == std::string::npos) {
            if (s.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad table header");
            table = trim(s.substr(1, s.size() - 2));
            if (doc.count(table) && !doc[table].empty())
                throw ConfigError("table [" + table + "] defined twice");
            doc[table];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string rhs = trim(s.substr(eq + 1));
        if (!rhs.empty() && rhs.front() == '[' && rhs.find(']') == std::string::npos) {
            pending = s;
            pending_line = lineno;
            continue;
        }
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (doc[table].count(key)) throw ConfigError("duplicate key '" + key + "'");
        doc[table][key] = parse_value(rhs, lineno);
    }
    if (!pending.empty()) throw ConfigError("line " + std::to_string(pending_line) + ": unterminated array");
    return doc;
}

std::string serialize_toml(const TomlDoc& doc) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [name, table] : doc) {
        if (table.empty()) continue;
        if (!name.empty()) {
            if (!first) os << '\n';
            os << '[' << name << "]\n";
        }
        first = false;
        for (const auto& [key, val] : table) {
            os << key << " = ";
            if (const double* d = std::get_if<double>(&val)) {
                os << format_number(*d);
            } else if (const bool* b = std::get_if<bool>(&val)) {
                os << (*b ? "true" : "false");
            } else if (const std::string* s = std::get_if<std::string>(&val)) {
                os << quote(*s);
            } else if (const auto* vd = std::get_if<std::vector<double>>(&val)) {
                os << '[';
                for (size_t i = 0; i < vd->size(); ++i) os << (i ? ", " : "") << format_number((*vd)[i]);
                os << ']';
            } else if (const auto* vs = std::get_if<std::vector<std::string>>(&val)) {
                os << '[';
                for (size_t i = 0; i < vs->size(); ++i) os << (i ? ", " : "") << quote((*vs)[i]);
                os << ']';
            }
            os << '\n';
        }
    }
    return os.str();
}

}  // namespace cshell
