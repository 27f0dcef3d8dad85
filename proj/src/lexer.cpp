#include "lexer.hpp"

#include <array>
#include <cctype>

namespace featmc::detail {

namespace {

constexpr std::array<std::string_view, 31> kKeywords = {
    "module", "endmodule", "controller", "endcontroller", "feature", "endfeature", "root",   "rewards",
    "endrewards", "formula", "label", "const", "int", "double", "bool", "init", "true", "false", "all", "one",
    "of", "modules", "constraint", "initial", "activate", "deactivate", "active", "mdp", "requires", "filter",
    "endinit"};

// longest first so that "<=>" wins over "<="
constexpr std::array<std::string_view, 29> kSymbols = {
    "<=>", "->", "=>", "<=", ">=", "!=", "..", "=", "<", ">", "!", "&", "|", "+", "-",
    "*",   "/",  "(",  ")",  "[",  "]",  "{",  "}", ";", ":", ",", "?", "'", "$"};

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool digit(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

bool is_keyword(std::string_view word) {
    for (auto k : kKeywords)
        if (k == word) return true;
    return false;
}

std::string Token::describe() const {
    switch (kind) {
        case TokenKind::End:
            return "end of input";
        case TokenKind::String:
            return "\"" + text + "\"";
        default:
            return "'" + text + "'";
    }
}

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };

    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        SourcePos pos{line, col};
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            out.push_back({TokenKind::Identifier, std::string(src.substr(i, j - i)), pos});
            advance(j - i);
            continue;
        }
        if (digit(c)) {
            std::size_t j = i;
            while (j < src.size() && digit(src[j])) ++j;
            // a '.' starts a fraction only if a digit follows (keeps "0..12" intact)
            if (j + 1 < src.size() && src[j] == '.' && digit(src[j + 1])) {
                ++j;
                while (j < src.size() && digit(src[j])) ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < src.size() && digit(src[k])) {
                    while (k < src.size() && digit(src[k])) ++k;
                    j = k;
                }
            }
            out.push_back({TokenKind::Number, std::string(src.substr(i, j - i)), pos});
            advance(j - i);
            continue;
        }
        if (c == '"') {
            std::size_t j = i + 1;
            while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
            if (j >= src.size() || src[j] != '"') throw SyntaxError("unterminated string literal", pos, {"'\"'"});
            out.push_back({TokenKind::String, std::string(src.substr(i + 1, j - i - 1)), pos});
            advance(j + 1 - i);
            continue;
        }
        bool matched = false;
        for (auto sym : kSymbols) {
            if (src.substr(i, sym.size()) == sym) {
                out.push_back({TokenKind::Symbol, std::string(sym), pos});
                advance(sym.size());
                matched = true;
                break;
            }
        }
        if (!matched) {
            unsigned char uc = static_cast<unsigned char>(c);
            std::string shown = uc < 0x80 ? std::string(1, c) : "non-ASCII byte";
            throw SyntaxError("unexpected character '" + shown + "'", pos);
        }
    }
    out.push_back({TokenKind::End, "", SourcePos{line, col}});
    return out;
}

}  // namespace featmc::detail
