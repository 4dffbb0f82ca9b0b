#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "shiftprod/errors.hpp"

namespace shiftprod {

/// Hand-rolled scanner shared by the scalar, set and progression parsers.
/// Every failure raises ParseError carrying the offset into the original text.
class TextCursor {
public:
    explicit TextCursor(std::string_view text) : text_(text) {}

    std::size_t pos() const { return pos_; }
    std::string_view text() const { return text_; }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool at_end()
    {
        skip_ws();
        return pos_ >= text_.size();
    }

    char peek()
    {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool consume(char c)
    {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!consume(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    /// Consumes `word` if it is next (after whitespace) and not followed by an
    /// identifier character.
    bool consume_word(std::string_view word)
    {
        skip_ws();
        if (text_.substr(pos_, word.size()) != word) {
            return false;
        }
        const std::size_t after = pos_ + word.size();
        if (after < text_.size() && std::isalnum(static_cast<unsigned char>(text_[after]))) {
            return false;
        }
        pos_ = after;
        return true;
    }

    void expect_word(std::string_view word)
    {
        if (!consume_word(word)) {
            fail("expected '" + std::string(word) + "'");
        }
    }

    /// Optional sign followed by decimal digits; returns the raw token.
    std::string_view signed_digits()
    {
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
            ++pos_;
        }
        const std::size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (pos_ == digits) {
            pos_ = start;
            fail("expected integer");
        }
        return text_.substr(start, pos_ - start);
    }

    std::string_view unsigned_digits()
    {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (pos_ == start) {
            fail("expected digits");
        }
        return text_.substr(start, pos_ - start);
    }

    std::int64_t int64()
    {
        skip_ws();
        const std::size_t start = pos_;
        std::string_view tok = signed_digits();
        if (!tok.empty() && tok.front() == '+') {
            tok.remove_prefix(1);
        }
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            pos_ = start;
            fail("integer out of range");
        }
        return value;
    }

    std::uint64_t uint64()
    {
        skip_ws();
        const std::size_t start = pos_;
        std::string_view tok = unsigned_digits();
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            pos_ = start;
            fail("integer out of range");
        }
        return value;
    }

    void expect_end()
    {
        if (!at_end()) {
            fail("unexpected trailing input");
        }
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace shiftprod
