#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "featmc/errors.hpp"

namespace featmc::detail {

enum class TokenKind { Identifier, Number, String, Symbol, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    SourcePos pos;

    bool is(std::string_view symbol) const {
        return (kind == TokenKind::Symbol || kind == TokenKind::Identifier) && text == symbol;
    }
    std::string describe() const;
};

/// Splits model/property text into tokens; `//` comments run to end of line.
std::vector<Token> tokenize(std::string_view text);

bool is_keyword(std::string_view word);

}  // namespace featmc::detail
