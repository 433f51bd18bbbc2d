#include "tatlab/toml_lite.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tatlab {

namespace {

using Json = nlohmann::ordered_json;

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    Json parse() {
        Json root = Json::object();
        Json* current = &root;
        while (!eof()) {
            skip_blank_and_comments();
            if (eof()) break;
            if (peek() == '[') {
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '[')
                    fail("arrays of tables ([[...]]) are not supported");
                current = parse_table_header(root);
            } else {
                parse_keyval(*current);
            }
            skip_spaces();
            if (!eof() && peek() == '#') skip_comment();
            if (!eof() && peek() != '\n')
                fail("unexpected trailing content");
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw ConfigError("toml parse error (line " + std::to_string(line_) + "): " + message);
    }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    char advance() {
        const char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    void skip_spaces() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
    }

    void skip_comment() {
        while (!eof() && peek() != '\n') advance();
    }

    void skip_blank_and_comments() {
        while (!eof()) {
            skip_spaces();
            if (eof()) break;
            if (peek() == '#') { skip_comment(); continue; }
            if (peek() == '\n') { advance(); continue; }
            break;
        }
    }

    // Whitespace inside arrays may span lines and contain comments.
    void skip_array_filler() { skip_blank_and_comments(); }

    static bool is_bare_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    }

    std::string parse_key() {
        skip_spaces();
        if (eof()) fail("expected a key");
        if (peek() == '"' || peek() == '\'') return parse_string();
        std::string key;
        while (!eof() && is_bare_char(peek())) key.push_back(advance());
        if (key.empty()) fail("expected a key");
        return key;
    }

    Json* parse_table_header(Json& root) {
        advance();  // '['
        Json* node = &root;
        while (true) {
            const std::string key = parse_key();
            skip_spaces();
            if (!node->contains(key)) (*node)[key] = Json::object();
            Json& child = (*node)[key];
            if (!child.is_object()) fail("table '" + key + "' conflicts with an existing value");
            node = &child;
            if (eof()) fail("unterminated table header");
            if (peek() == '.') { advance(); continue; }
            if (peek() == ']') { advance(); break; }
            fail("expected '.' or ']' in table header");
        }
        return node;
    }

    void parse_keyval(Json& table) {
        const std::string key = parse_key();
        skip_spaces();
        if (!eof() && peek() == '.')
            fail("dotted keys are not supported; use a [table] header");
        if (eof() || peek() != '=') fail("expected '=' after key '" + key + "'");
        advance();
        skip_spaces();
        if (table.contains(key)) fail("duplicate key '" + key + "'");
        table[key] = parse_value();
    }

    Json parse_value() {
        skip_spaces();
        if (eof()) fail("expected a value");
        const char c = peek();
        if (c == '"' || c == '\'') return Json(parse_string());
        if (c == '[') return parse_array();
        if (c == '{') fail("inline tables are not supported; use a [table] header");
        return parse_scalar();
    }

    std::string parse_string() {
        const char quote = advance();
        if (!eof() && peek() == quote) {
            // empty string or the start of a multi-line string
            advance();
            if (!eof() && peek() == quote) fail("multi-line strings are not supported");
            return "";
        }
        std::string out;
        while (!eof()) {
            char c = advance();
            if (c == quote) return out;
            if (c == '\n') fail("unterminated string");
            if (quote == '"' && c == '\\') {
                if (eof()) fail("unterminated escape");
                const char e = advance();
                switch (e) {
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case 'r': out.push_back('\r'); break;
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    default: fail(std::string("unsupported escape '\\") + e + "'");
                }
                continue;
            }
            out.push_back(c);
        }
        fail("unterminated string");
    }

    Json parse_array() {
        advance();  // '['
        Json arr = Json::array();
        skip_array_filler();
        if (!eof() && peek() == ']') { advance(); return arr; }
        while (true) {
            skip_array_filler();
            arr.push_back(parse_value());
            skip_array_filler();
            if (eof()) fail("unterminated array");
            if (peek() == ',') {
                advance();
                skip_array_filler();
                if (!eof() && peek() == ']') { advance(); return arr; }
                continue;
            }
            if (peek() == ']') { advance(); return arr; }
            fail("expected ',' or ']' in array");
        }
    }

    Json parse_scalar() {
        std::string token;
        while (!eof()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ',' || c == ']' || c == '#')
                break;
            token.push_back(advance());
        }
        if (token.empty()) fail("expected a value");
        if (token == "true") return Json(true);
        if (token == "false") return Json(false);

        std::string cleaned;
        cleaned.reserve(token.size());
        for (char c : token)
            if (c != '_') cleaned.push_back(c);

        std::string body = cleaned;
        double sign = 1.0;
        if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
            if (body[0] == '-') sign = -1.0;
            body = body.substr(1);
        }
        if (body == "inf") return Json(sign * std::numeric_limits<double>::infinity());
        if (body == "nan") return Json(std::numeric_limits<double>::quiet_NaN());
        if (body.find_first_of(":tTzZ") != std::string::npos)
            fail("date/time values are not supported");

        const bool looks_float = cleaned.find_first_of(".eE") != std::string::npos;
        try {
            std::size_t used = 0;
            if (looks_float) {
                const double v = std::stod(cleaned, &used);
                if (used != cleaned.size()) fail("malformed number '" + token + "'");
                return Json(v);
            }
            const long long v = std::stoll(cleaned, &used);
            if (used != cleaned.size()) fail("malformed number '" + token + "'");
            return Json(v);
        } catch (const std::exception&) {
            fail("malformed value '" + token + "'");
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

}  // namespace

nlohmann::ordered_json parse_toml(const std::string& text) {
    return Parser(text).parse();
}

nlohmann::ordered_json parse_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_toml(buf.str());
}

}  // namespace tatlab
