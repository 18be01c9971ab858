#include "tomo/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace tomo {

namespace {

class TomlParser {
public:
    explicit TomlParser(std::string_view text) : text_(text) {}

    nlohmann::json parse() {
        nlohmann::json root = nlohmann::json::object();
        nlohmann::json* table = &root;
        while (true) {
            skip_blank_lines();
            if (eof()) break;
            if (peek() == '[') {
                ++pos_;
                table = &root;
                for (const auto& part : parse_key_path(']')) {
                    auto& next = (*table)[part];
                    if (next.is_null()) next = nlohmann::json::object();
                    if (!next.is_object()) fail("table name collides with a value: " + part);
                    table = &next;
                }
                expect(']');
            } else {
                const auto path = parse_key_path('=');
                expect('=');
                nlohmann::json* target = table;
                for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                    auto& next = (*target)[path[i]];
                    if (next.is_null()) next = nlohmann::json::object();
                    target = &next;
                }
                if (target->contains(path.back())) fail("duplicate key: " + path.back());
                (*target)[path.back()] = parse_value();
            }
            end_of_line();
        }
        return root;
    }

private:
    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return eof() ? '\0' : text_[pos_]; }

    [[noreturn]] void fail(const std::string& msg) const {
        int line = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) line += text_[i] == '\n';
        throw ConfigError("TOML line " + std::to_string(line) + ": " + msg);
    }

    void skip_spaces() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
    }

    void skip_comment() {
        if (peek() == '#') {
            while (!eof() && peek() != '\n') ++pos_;
        }
    }

    void skip_blank_lines() {
        while (!eof()) {
            skip_spaces();
            skip_comment();
            if (peek() == '\n' || peek() == '\r') {
                ++pos_;
            } else {
                break;
            }
        }
    }

    // Whitespace, comments, and newlines (inside arrays).
    void skip_all() {
        while (!eof()) {
            const std::size_t before = pos_;
            skip_blank_lines();
            if (pos_ == before) break;
        }
    }

    void end_of_line() {
        skip_spaces();
        skip_comment();
        if (eof()) return;
        if (peek() == '\r') ++pos_;
        if (peek() != '\n') fail("expected end of line");
        ++pos_;
    }

    void expect(char c) {
        skip_spaces();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::vector<std::string> parse_key_path(char terminator) {
        std::vector<std::string> parts;
        while (true) {
            skip_spaces();
            if (peek() == '"') {
                parts.push_back(parse_string());
            } else {
                const std::size_t start = pos_;
                while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) {
                    ++pos_;
                }
                if (pos_ == start) fail("expected a key");
                parts.emplace_back(text_.substr(start, pos_ - start));
            }
            skip_spaces();
            if (peek() == '.') {
                ++pos_;
                continue;
            }
            if (peek() != terminator) fail(std::string("expected '") + terminator + "' after key");
            return parts;
        }
    }

    std::string parse_string() {
        ++pos_;  // opening quote
        std::string out;
        while (!eof() && peek() != '"') {
            char c = text_[pos_++];
            if (c == '\n') fail("unterminated string");
            if (c == '\\') {
                if (eof()) fail("unterminated escape");
                const char e = text_[pos_++];
                switch (e) {
                    case 'n': c = '\n'; break;
                    case 't': c = '\t'; break;
                    case '\\': c = '\\'; break;
                    case '"': c = '"'; break;
                    default: fail(std::string("unsupported escape \\") + e);
                }
            }
            out.push_back(c);
        }
        if (eof()) fail("unterminated string");
        ++pos_;
        return out;
    }

    nlohmann::json parse_value() {
        skip_spaces();
        const char c = peek();
        if (c == '"') return parse_string();
        if (c == '[') return parse_array();
        if (text_.substr(pos_, 4) == "true") {
            pos_ += 4;
            return true;
        }
        if (text_.substr(pos_, 5) == "false") {
            pos_ += 5;
            return false;
        }
        return parse_number();
    }

    nlohmann::json parse_array() {
        ++pos_;
        nlohmann::json arr = nlohmann::json::array();
        while (true) {
            skip_all();
            if (peek() == ']') {
                ++pos_;
                return arr;
            }
            arr.push_back(parse_value());
            skip_all();
            if (peek() == ',') {
                ++pos_;
            } else if (peek() != ']') {
                fail("expected ',' or ']' in array");
            }
        }
    }

    nlohmann::json parse_number() {
        const std::size_t start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                          peek() == '.' || peek() == '_')) {
            ++pos_;
        }
        std::string token;
        for (char ch : text_.substr(start, pos_ - start)) {
            if (ch != '_') token.push_back(ch);
        }
        if (token.empty()) fail("expected a value");
        const bool is_float = token.find_first_of(".eE") != std::string::npos || token == "inf" ||
                              token == "+inf" || token == "-inf" || token == "nan";
        if (!is_float) {
            std::int64_t v = 0;
            const char* first = token.data() + (token[0] == '+' ? 1 : 0);
            auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), v);
            if (ec != std::errc() || ptr != token.data() + token.size()) fail("bad integer: " + token);
            return v;
        }
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size()) fail("bad number: " + token);
        return v;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

nlohmann::json parse_toml(std::string_view text) { return TomlParser(text).parse(); }

nlohmann::json load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto ext = path.extension().string();
    if (ext == ".json") {
        try {
            return nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(path.string() + ": " + e.what());
        }
    }
    if (ext != ".toml") {
        auto j = nlohmann::json::parse(text, nullptr, false);
        if (!j.is_discarded()) return j;
    }
    try {
        return parse_toml(text);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace tomo
