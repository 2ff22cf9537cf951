#include "zadnet/jsonout.hpp"

#include <cstdio>

namespace zadnet {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

JsonValue JsonValue::object() { JsonValue v; v.kind_ = Kind::Object; return v; }
JsonValue JsonValue::array() { JsonValue v; v.kind_ = Kind::Array; return v; }
JsonValue JsonValue::str(std::string s) {
    JsonValue v;
    v.kind_ = Kind::String;
    v.string_ = std::move(s);
    return v;
}
JsonValue JsonValue::num(double x) { JsonValue v; v.kind_ = Kind::Number; v.number_ = x; return v; }
JsonValue JsonValue::integer(std::int64_t x) { JsonValue v; v.kind_ = Kind::Int; v.int_ = x; return v; }
JsonValue JsonValue::uinteger(std::uint64_t x) { JsonValue v; v.kind_ = Kind::UInt; v.uint_ = x; return v; }
JsonValue JsonValue::boolean(bool x) { JsonValue v; v.kind_ = Kind::Bool; v.bool_ = x; return v; }

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
    members_.emplace_back(key, std::move(v));
    return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
    elements_.push_back(std::move(v));
    return *this;
}

void JsonValue::write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<size_t>(indent) * (depth + 1), ' ');
    const std::string closepad(static_cast<size_t>(indent) * depth, ' ');
    switch (kind_) {
        case Kind::Object: {
            if (members_.empty()) { out += "{}"; return; }
            out += "{\n";
            for (size_t i = 0; i < members_.size(); ++i) {
                out += pad;
                out += '"';
                out += json_escape(members_[i].first);
                out += "\": ";
                members_[i].second.write(out, indent, depth + 1);
                if (i + 1 < members_.size()) out += ',';
                out += '\n';
            }
            out += closepad;
            out += '}';
            break;
        }
        case Kind::Array: {
            if (elements_.empty()) { out += "[]"; return; }
            // short numeric arrays stay on one line
            bool scalars_only = true;
            for (const auto& e : elements_)
                if (e.kind_ == Kind::Object || e.kind_ == Kind::Array) scalars_only = false;
            if (scalars_only) {
                out += '[';
                for (size_t i = 0; i < elements_.size(); ++i) {
                    elements_[i].write(out, indent, depth);
                    if (i + 1 < elements_.size()) out += ", ";
                }
                out += ']';
            } else {
                out += "[\n";
                for (size_t i = 0; i < elements_.size(); ++i) {
                    out += pad;
                    elements_[i].write(out, indent, depth + 1);
                    if (i + 1 < elements_.size()) out += ',';
                    out += '\n';
                }
                out += closepad;
                out += ']';
            }
            break;
        }
        case Kind::String:
            out += '"';
            out += json_escape(string_);
            out += '"';
            break;
        case Kind::Number: out += format_double(number_); break;
        case Kind::Int: out += std::to_string(int_); break;
        case Kind::UInt: out += std::to_string(uint_); break;
        case Kind::Bool: out += bool_ ? "true" : "false"; break;
    }
}

std::string JsonValue::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

}  // namespace zadnet
