#ifndef HTN_SEXPR_H
#define HTN_SEXPR_H

#include "htn/error.h"

#include <string>
#include <string_view>
#include <vector>

namespace htn {

// A parsed s-expression. Symbols are lower-cased; ';' starts a comment.
struct SExpr {
    bool list = false;
    std::string symbol;
    std::vector<SExpr> items;
    SourceSpan span;

    bool is_symbol() const { return !list; }
    bool is_symbol(std::string_view s) const { return !list && symbol == s; }
    bool is_list() const { return list; }
    // List whose first item is the symbol `head`.
    bool is_form(std::string_view head) const;
    std::string to_string() const;
};

std::vector<SExpr> read_sexprs(std::string_view text, const std::string &file = "");

} // namespace htn

#endif
