#include "htn/sexpr.h"

#include <cctype>

namespace htn {

std::string SourceSpan::to_string() const {
    std::string out = file.empty() ? "<input>" : file;
    out += ":" + std::to_string(line) + ":" + std::to_string(column);
    return out;
}

ParseError::ParseError(const SourceSpan &span, const std::string &message)
    : Error(span.to_string() + ": " + message), span_(span) {
}

bool SExpr::is_form(std::string_view head) const {
    return list && !items.empty() && items.front().is_symbol(head);
}

std::string SExpr::to_string() const {
    if (!list)
        return symbol;
    std::string out = "(";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += ' ';
        out += items[i].to_string();
    }
    return out + ")";
}

namespace {

class Reader {
public:
    Reader(std::string_view text, const std::string &file) : text_(text), file_(file) {}

    std::vector<SExpr> read_all() {
        std::vector<SExpr> out;
        while (true) {
            skip_blank();
            if (pos_ >= text_.size())
                break;
            out.push_back(read());
        }
        return out;
    }

private:
    SourceSpan here() const { return SourceSpan{file_, line_, col_, line_, col_}; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read() {
        skip_blank();
        if (pos_ >= text_.size())
            throw ParseError(here(), "unexpected end of input");
        SExpr node;
        node.span = here();
        char c = text_[pos_];
        if (c == ')')
            throw ParseError(here(), "unexpected ')'");
        if (c == '(') {
            node.list = true;
            advance();
            while (true) {
                skip_blank();
                if (pos_ >= text_.size())
                    throw ParseError(node.span, "unclosed '('");
                if (text_[pos_] == ')') {
                    advance();
                    break;
                }
                node.items.push_back(read());
            }
        } else {
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d)))
                    break;
                node.symbol += static_cast<char>(std::tolower(static_cast<unsigned char>(d)));
                advance();
            }
        }
        node.span.end_line = line_;
        node.span.end_column = col_;
        return node;
    }

    std::string_view text_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

} // namespace

std::vector<SExpr> read_sexprs(std::string_view text, const std::string &file) {
    return Reader(text, file).read_all();
}

} // namespace htn
