#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace zadnet {

// Deterministic JSON emitter: keys keep insertion order and every double is
// printed with 17 significant digits, so identical documents are identical
// bytes. Parsing stays with nlohmann::json; this is output only.
class JsonValue {
  public:
    static JsonValue object();
    static JsonValue array();
    static JsonValue str(std::string s);
    static JsonValue num(double v);
    static JsonValue integer(std::int64_t v);
    static JsonValue uinteger(std::uint64_t v);
    static JsonValue boolean(bool v);

    JsonValue& set(const std::string& key, JsonValue v);  // object member
    JsonValue& push(JsonValue v);                         // array element

    std::string dump(int indent = 2) const;

  private:
    enum class Kind { Object, Array, String, Number, Int, UInt, Bool };
    Kind kind_ = Kind::Object;
    std::vector<std::pair<std::string, JsonValue>> members_;
    std::vector<JsonValue> elements_;
    std::string string_;
    double number_ = 0.0;
    std::int64_t int_ = 0;
    std::uint64_t uint_ = 0;
    bool bool_ = false;

    void write(std::string& out, int indent, int depth) const;
};

/// %.17g rendering used for every floating-point value in machine-readable
/// output files.
std::string format_double(double v);

std::string json_escape(const std::string& s);

}  // namespace zadnet
