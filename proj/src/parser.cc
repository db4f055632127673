#include "htn/parser.h"

#include "htn/error.h"
#include "htn/sexpr.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace htn {

namespace {

[[noreturn]] void fail(const SExpr &at, const std::string &message) {
    throw ParseError(at.span, message);
}

const SExpr &expect_list(const SExpr &s, const char *what) {
    if (!s.is_list())
        fail(s, std::string("expected ") + what + ", got '" + s.symbol + "'");
    return s;
}

const std::string &expect_symbol(const SExpr &s, const char *what) {
    if (!s.is_symbol())
        fail(s, std::string("expected ") + what);
    return s.symbol;
}

bool is_variable_name(const std::string &s) {
    return s.size() > 1 && s[0] == '?';
}

struct TypedName {
    std::string name;
    std::string type;
    const SExpr *at;
};

// "a b - t c" -> [(a,t) (b,t) (c,object)]
std::vector<TypedName> parse_typed_list(const SExpr &list, std::size_t first, bool variables) {
    std::vector<TypedName> out;
    std::size_t pending_from = 0;
    for (std::size_t i = first; i < list.items.size(); ++i) {
        const SExpr &item = list.items[i];
        if (item.is_symbol("-")) {
            if (i + 1 >= list.items.size())
                fail(item, "type expected after '-'");
            const SExpr &type = list.items[++i];
            if (type.is_form("either"))
                fail(type, "'either' types are not supported");
            const std::string &t = expect_symbol(type, "type name");
            if (pending_from == out.size())
                fail(item, "'-' without preceding names");
            for (std::size_t k = pending_from; k < out.size(); ++k)
                out[k].type = t;
            pending_from = out.size();
            continue;
        }
        const std::string &name = expect_symbol(item, variables ? "variable" : "name");
        if (variables && !is_variable_name(name))
            fail(item, "variable names must start with '?': '" + name + "'");
        if (!variables && is_variable_name(name))
            fail(item, "unexpected variable '" + name + "'");
        out.push_back(TypedName{name, kRootType, &item});
    }
    return out;
}

std::vector<TypedVariable> to_variables(const std::vector<TypedName> &names) {
    std::vector<TypedVariable> out;
    std::set<std::string> seen;
    for (const auto &n : names) {
        if (!seen.insert(n.name).second)
            fail(*n.at, "duplicate variable '" + n.name + "'");
        out.push_back(TypedVariable{n.name, n.type});
    }
    return out;
}

struct ExprContext {
    const Domain *domain = nullptr;
    const TypeHierarchy *objects = nullptr;
    std::vector<TypedVariable> scope;
    // When set, unknown variables are recorded here instead of rejected.
    std::vector<TypedVariable> *free_vars = nullptr;
    bool effect = false;
    bool ground_only = false;

    void check_type(const SExpr &at, const std::string &type) const {
        if (!objects->has_type(type))
            fail(at, "unknown type '" + type + "'");
    }
};

Term parse_term(const SExpr &s, ExprContext &ctx) {
    const std::string &name = expect_symbol(s, "term");
    if (is_variable_name(name)) {
        if (ctx.ground_only)
            fail(s, "variable '" + name + "' not allowed here");
        for (auto it = ctx.scope.rbegin(); it != ctx.scope.rend(); ++it)
            if (it->name == name)
                return Term::variable(name);
        if (ctx.free_vars) {
            auto &fv = *ctx.free_vars;
            if (std::none_of(fv.begin(), fv.end(), [&](const TypedVariable &v) { return v.name == name; }))
                fv.push_back(TypedVariable{name, ""});
            return Term::variable(name);
        }
        fail(s, "undeclared variable '" + name + "'");
    }
    if (!ctx.objects->has_object(name))
        fail(s, "unknown constant '" + name + "'");
    return Term::constant(name);
}

Atom parse_atom(const SExpr &s, ExprContext &ctx) {
    const std::string &pred = expect_symbol(s.items.front(), "predicate name");
    const PredicateSignature *sig = ctx.domain->find_predicate(pred);
    if (!sig)
        fail(s, "undeclared predicate '" + pred + "'");
    if (sig->params.size() + 1 != s.items.size())
        fail(s, "predicate '" + pred + "' expects " + std::to_string(sig->params.size()) +
                    " arguments, got " + std::to_string(s.items.size() - 1));
    Atom atom;
    atom.predicate = pred;
    for (std::size_t i = 1; i < s.items.size(); ++i)
        atom.args.push_back(parse_term(s.items[i], ctx));
    return atom;
}

Expression parse_expression(const SExpr &s, ExprContext &ctx) {
    expect_list(s, "formula");
    if (s.items.empty())
        return Expression::truth();
    const SExpr &head = s.items.front();
    if (!head.is_symbol())
        fail(head, "expected connective or predicate");
    const std::string &op = head.symbol;
    auto children = [&](std::size_t from) {
        std::vector<Expression> out;
        for (std::size_t i = from; i < s.items.size(); ++i)
            out.push_back(parse_expression(s.items[i], ctx));
        return out;
    };
    auto effect_error = [&]() {
        fail(s, "effects must be a conjunction of literals; '" + op + "' is not allowed");
    };
    if (op == "and")
        return Expression::conjunction(children(1));
    if (op == "or") {
        if (ctx.effect)
            effect_error();
        return Expression::disjunction(children(1));
    }
    if (op == "not") {
        if (s.items.size() != 2)
            fail(s, "'not' takes exactly one argument");
        Expression inner = parse_expression(s.items[1], ctx);
        if (ctx.effect && !inner.is_atom())
            fail(s, "negation in effects must apply to an atom");
        return Expression::negation(std::move(inner));
    }
    if (op == "imply") {
        if (ctx.effect)
            effect_error();
        if (s.items.size() != 3)
            fail(s, "'imply' takes exactly two arguments");
        auto parts = children(1);
        return Expression::implication(std::move(parts[0]), std::move(parts[1]));
    }
    if (op == "forall" || op == "exists") {
        if (ctx.effect && op == "exists")
            effect_error();
        if (s.items.size() != 3)
            fail(s, "'" + op + "' expects a variable list and a body");
        auto vars = to_variables(parse_typed_list(expect_list(s.items[1], "variable list"), 0, true));
        if (vars.empty())
            fail(s.items[1], "empty quantifier variable list");
        for (const auto &v : vars)
            ctx.check_type(s.items[1], v.type);
        bool saved_ground = ctx.ground_only;
        ctx.ground_only = false;
        for (const auto &v : vars)
            ctx.scope.push_back(v);
        Expression body = parse_expression(s.items[2], ctx);
        ctx.scope.resize(ctx.scope.size() - vars.size());
        ctx.ground_only = saved_ground;
        for (auto it = vars.rbegin(); it != vars.rend(); ++it)
            body = op == "forall" ? Expression::forall(*it, std::move(body))
                                  : Expression::exists(*it, std::move(body));
        return body;
    }
    if (op == "when")
        fail(s, "conditional effects are not supported");
    if (op == "true" && s.items.size() == 1)
        return Expression::truth();
    if (op == "false" && s.items.size() == 1)
        return Expression::falsity();
    if (op == "=")
        fail(s, "equality is not supported");
    return Expression::make_atom(parse_atom(s, ctx));
}

// A bare tag or a parenthesized list of tags.
std::vector<std::string> parse_group(const SExpr &s, const std::map<std::string, int> &tags) {
    std::vector<std::string> out;
    auto add = [&](const SExpr &t) {
        const std::string &tag = expect_symbol(t, "tag");
        if (!tags.count(tag))
            fail(t, "constraint references unknown tag '" + tag + "'");
        out.push_back(tag);
    };
    if (s.is_symbol()) {
        add(s);
    } else {
        for (const auto &t : s.items)
            add(t);
    }
    if (out.empty())
        fail(s, "empty tag group");
    return out;
}

std::vector<Constraint> parse_constraints(const SExpr &s, const std::map<std::string, int> &tags,
                                          ExprContext &ctx) {
    expect_list(s, "constraints");
    std::vector<Constraint> out;
    if (s.items.empty())
        return out;
    if (s.is_form("and")) {
        for (std::size_t i = 1; i < s.items.size(); ++i) {
            auto inner = parse_constraints(s.items[i], tags, ctx);
            out.insert(out.end(), inner.begin(), inner.end());
        }
        return out;
    }
    const std::string &kw = expect_symbol(s.items.front(), "constraint keyword");
    Constraint c;
    if (kw == "series") {
        c.kind = Constraint::Kind::Series;
        if (s.items.size() < 2)
            fail(s, "'series' needs at least one tag");
        for (std::size_t i = 1; i < s.items.size(); ++i) {
            auto group = parse_group(s.items[i], tags);
            c.tags.insert(c.tags.end(), group.begin(), group.end());
        }
    } else if (kw == "before" || kw == "after") {
        c.kind = kw == "before" ? Constraint::Kind::Before : Constraint::Kind::After;
        if (s.items.size() != 3)
            fail(s, "'" + kw + "' expects a formula and a tag group");
        c.formula = parse_expression(s.items[1], ctx);
        c.tags = parse_group(s.items[2], tags);
    } else if (kw == "between") {
        c.kind = Constraint::Kind::Between;
        if (s.items.size() != 4)
            fail(s, "'between' expects a formula and two tag groups");
        c.formula = parse_expression(s.items[1], ctx);
        c.tags = parse_group(s.items[2], tags);
        c.tags2 = parse_group(s.items[3], tags);
    } else {
        fail(s.items.front(), "unknown constraint keyword '" + kw + "'");
    }
    out.push_back(std::move(c));
    return out;
}

struct RawTask {
    std::string tag;
    const SExpr *task;
    const SExpr *at;
};

std::vector<RawTask> parse_tagged_tasks(const SExpr &s) {
    expect_list(s, "task list");
    std::vector<RawTask> out;
    std::set<std::string> seen;
    for (const auto &item : s.items) {
        if (!item.is_form("tag") || item.items.size() != 3)
            fail(item, "expected (tag <name> (<task> args...))");
        const std::string &tag = expect_symbol(item.items[1], "tag name");
        if (!seen.insert(tag).second)
            fail(item.items[1], "duplicate tag '" + tag + "'");
        const SExpr &task = expect_list(item.items[2], "task");
        if (task.items.empty())
            fail(task, "empty task");
        out.push_back(RawTask{tag, &task, &item});
    }
    return out;
}

TaskRef parse_task(const SExpr &s, ExprContext &ctx) {
    TaskRef t;
    t.name = expect_symbol(s.items.front(), "task name");
    for (std::size_t i = 1; i < s.items.size(); ++i)
        t.args.push_back(parse_term(s.items[i], ctx));
    return t;
}

// Sets TaskRef::primitive and checks the task is known with a matching arity.
void resolve_task(TaskRef &task, const Domain &d, const SExpr &at) {
    if (const OperatorSchema *op = d.find_operator(task.name)) {
        task.primitive = true;
        if (op->params.size() != task.args.size())
            fail(at, "task '" + task.name + "' expects " + std::to_string(op->params.size()) +
                         " arguments, got " + std::to_string(task.args.size()));
        return;
    }
    auto methods = d.methods_for(task.name);
    if (methods.empty())
        fail(at, "no operator or method is relevant for task '" + task.name + "'");
    task.primitive = false;
    if (methods.front()->params.size() != task.args.size())
        fail(at, "task '" + task.name + "' expects " +
                     std::to_string(methods.front()->params.size()) + " arguments, got " +
                     std::to_string(task.args.size()));
}

const SExpr &single_define(const std::vector<SExpr> &forms, const SExpr *fallback_at,
                           const char *kind) {
    if (forms.size() != 1 || !forms.front().is_form("define")) {
        SourceSpan span = forms.empty() ? (fallback_at ? fallback_at->span : SourceSpan{})
                                        : forms.front().span;
        throw ParseError(span, std::string("expected a single (define (") + kind + " ...)) form");
    }
    const SExpr &def = forms.front();
    if (def.items.size() < 2 || !def.items[1].is_form(kind) || def.items[1].items.size() != 2)
        fail(def, std::string("expected (define (") + kind + " <name>) ...)");
    return def;
}

// Keyword arguments of an :action / :method form.
std::map<std::string, const SExpr *> keyword_args(const SExpr &form, std::size_t first) {
    std::map<std::string, const SExpr *> out;
    for (std::size_t i = first; i < form.items.size(); i += 2) {
        const SExpr &key = form.items[i];
        if (!key.is_symbol() || key.symbol.empty() || key.symbol[0] != ':')
            fail(key, "expected a keyword");
        if (i + 1 >= form.items.size())
            fail(key, "missing value for " + key.symbol);
        if (!out.emplace(key.symbol, &form.items[i + 1]).second)
            fail(key, "duplicate keyword " + key.symbol);
    }
    return out;
}

class DomainParser {
public:
    explicit DomainParser(const SExpr &def) : def_(def) {}

    Domain parse() {
        d_.name = expect_symbol(def_.items[1].items[1], "domain name");
        for (std::size_t i = 2; i < def_.items.size(); ++i) {
            const SExpr &sec = expect_list(def_.items[i], "domain section");
            if (sec.items.empty() || !sec.items.front().is_symbol())
                fail(sec, "malformed domain section");
            const std::string &kw = sec.items.front().symbol;
            if (kw == ":requirements")
                continue;
            if (kw == ":types")
                parse_types(sec);
            else if (kw == ":constants")
                parse_constants(sec);
            else if (kw == ":predicates")
                parse_predicates(sec);
            else if (kw == ":action")
                parse_action(sec);
            else if (kw == ":method")
                method_forms_.push_back(&sec);
            else
                fail(sec.items.front(), "unknown domain section '" + kw + "'");
        }
        for (const SExpr *m : method_forms_)
            parse_method(*m);
        resolve();
        return std::move(d_);
    }

private:
    void parse_types(const SExpr &sec) {
        for (const auto &t : parse_typed_list(sec, 1, false)) {
            try {
                d_.hierarchy.add_type(t.name, t.type);
            } catch (const TypingError &e) {
                fail(*t.at, e.what());
            }
        }
    }

    void parse_constants(const SExpr &sec) {
        for (const auto &c : parse_typed_list(sec, 1, false)) {
            if (!d_.hierarchy.has_type(c.type))
                fail(*c.at, "unknown type '" + c.type + "'");
            try {
                d_.hierarchy.add_object(c.name, c.type);
            } catch (const TypingError &e) {
                fail(*c.at, e.what());
            }
        }
    }

    void parse_predicates(const SExpr &sec) {
        for (std::size_t i = 1; i < sec.items.size(); ++i) {
            const SExpr &p = expect_list(sec.items[i], "predicate declaration");
            if (p.items.empty())
                fail(p, "empty predicate declaration");
            PredicateSignature sig;
            sig.name = expect_symbol(p.items.front(), "predicate name");
            if (d_.find_predicate(sig.name))
                fail(p, "duplicate predicate '" + sig.name + "'");
            sig.params = to_variables(parse_typed_list(p, 1, true));
            for (const auto &v : sig.params)
                check_type(p, v.type);
            d_.predicates.push_back(std::move(sig));
        }
    }

    void check_type(const SExpr &at, const std::string &type) const {
        if (!d_.hierarchy.has_type(type))
            fail(at, "unknown type '" + type + "'");
    }

    ExprContext context(const std::vector<TypedVariable> &scope) const {
        ExprContext ctx;
        ctx.domain = &d_;
        ctx.objects = &d_.hierarchy;
        ctx.scope = scope;
        return ctx;
    }

    std::vector<TypedVariable> parse_parameters(const std::map<std::string, const SExpr *> &kw) {
        auto it = kw.find(":parameters");
        if (it == kw.end())
            return {};
        const SExpr &list = expect_list(*it->second, "parameter list");
        auto params = to_variables(parse_typed_list(list, 0, true));
        for (const auto &v : params)
            check_type(list, v.type);
        return params;
    }

    void parse_action(const SExpr &sec) {
        if (sec.items.size() < 2)
            fail(sec, "action without a name");
        OperatorSchema op;
        op.name = expect_symbol(sec.items[1], "action name");
        if (d_.find_operator(op.name))
            fail(sec, "duplicate action '" + op.name + "'");
        auto kw = keyword_args(sec, 2);
        for (const auto &[key, value] : kw)
            if (key != ":parameters" && key != ":precondition" && key != ":effect")
                fail(*value, "unknown action keyword '" + key + "'");
        op.params = parse_parameters(kw);
        ExprContext ctx = context(op.params);
        op.precondition = kw.count(":precondition") ? parse_expression(*kw.at(":precondition"), ctx)
                                                    : Expression::truth();
        ctx.effect = true;
        op.effect = kw.count(":effect") ? parse_expression(*kw.at(":effect"), ctx)
                                        : Expression::conjunction({});
        d_.operators.push_back(std::move(op));
    }

    void parse_method(const SExpr &sec) {
        if (sec.items.size() < 2)
            fail(sec, "method without a name");
        MethodSchema m;
        m.name = expect_symbol(sec.items[1], "method name");
        auto kw = keyword_args(sec, 2);
        for (const auto &[key, value] : kw)
            if (key != ":parameters" && key != ":expansion" && key != ":constraints")
                fail(*value, "unknown method keyword '" + key + "'");
        m.params = parse_parameters(kw);

        std::vector<RawTask> raw;
        if (kw.count(":expansion"))
            raw = parse_tagged_tasks(*kw.at(":expansion"));
        std::map<std::string, int> tags;
        for (std::size_t i = 0; i < raw.size(); ++i)
            tags[raw[i].tag] = static_cast<int>(i);

        ExprContext ctx = context(m.params);
        ctx.free_vars = &m.free_vars;
        // Free variables are ordered by first occurrence in the constraints,
        // then in the subtasks.
        if (kw.count(":constraints"))
            m.constraints = parse_constraints(*kw.at(":constraints"), tags, ctx);
        for (const auto &r : raw) {
            m.subtasks.push_back(TaggedTask{r.tag, parse_task(*r.task, ctx)});
            pending_tasks_.push_back({d_.methods.size(), m.subtasks.size() - 1, r.task});
        }
        d_.methods.push_back(std::move(m));
        method_spans_.push_back(&sec);
    }

    void resolve() {
        for (std::size_t i = 0; i < d_.methods.size(); ++i) {
            const auto &m = d_.methods[i];
            if (d_.find_operator(m.name))
                fail(*method_spans_[i], "'" + m.name + "' is both an operator and a method");
            auto same = d_.methods_for(m.name);
            if (same.front()->params.size() != m.params.size())
                fail(*method_spans_[i], "methods for task '" + m.name +
                                            "' disagree on the number of parameters");
        }
        for (const auto &p : pending_tasks_)
            resolve_task(d_.methods[p.method].subtasks[p.subtask].task, d_, *p.at);
    }

    struct PendingTask {
        std::size_t method;
        std::size_t subtask;
        const SExpr *at;
    };

    const SExpr &def_;
    Domain d_;
    std::vector<const SExpr *> method_forms_;
    std::vector<const SExpr *> method_spans_;
    std::vector<PendingTask> pending_tasks_;
};

} // namespace

Domain parse_domain(std::string_view text, const std::string &file) {
    auto forms = read_sexprs(text, file);
    return DomainParser(single_define(forms, nullptr, "domain")).parse();
}

Problem parse_problem(std::string_view text, const Domain &domain, const std::string &file) {
    auto forms = read_sexprs(text, file);
    const SExpr &def = single_define(forms, nullptr, "problem");
    Problem p;
    p.name = expect_symbol(def.items[1].items[1], "problem name");
    p.domain = domain;
    const SExpr *goal_tasks = nullptr;
    const SExpr *goal_constraints = nullptr;
    std::vector<const SExpr *> init;
    for (std::size_t i = 2; i < def.items.size(); ++i) {
        const SExpr &sec = expect_list(def.items[i], "problem section");
        if (sec.items.empty() || !sec.items.front().is_symbol())
            fail(sec, "malformed problem section");
        const std::string &kw = sec.items.front().symbol;
        if (kw == ":domain") {
            if (sec.items.size() != 2 || !sec.items[1].is_symbol(domain.name))
                fail(sec, "problem refers to a different domain than '" + domain.name + "'");
        } else if (kw == ":objects") {
            for (const auto &o : parse_typed_list(sec, 1, false)) {
                if (!p.domain.hierarchy.has_type(o.type))
                    fail(*o.at, "unknown object type '" + o.type + "'");
                try {
                    p.domain.hierarchy.add_object(o.name, o.type);
                } catch (const TypingError &e) {
                    fail(*o.at, e.what());
                }
                p.objects.push_back(o.name);
            }
        } else if (kw == ":init") {
            for (std::size_t k = 1; k < sec.items.size(); ++k)
                init.push_back(&sec.items[k]);
        } else if (kw == ":goal-tasks") {
            if (sec.items.size() != 2)
                fail(sec, "expected (:goal-tasks ((tag t (task ...)) ...))");
            goal_tasks = &sec.items[1];
        } else if (kw == ":goal-constraints") {
            if (sec.items.size() != 2)
                fail(sec, "expected (:goal-constraints C)");
            goal_constraints = &sec.items[1];
        } else if (kw == ":requirements") {
            continue;
        } else {
            fail(sec.items.front(), "unknown problem section '" + kw + "'");
        }
    }

    ExprContext ctx;
    ctx.domain = &p.domain;
    ctx.objects = &p.domain.hierarchy;
    ctx.ground_only = true;
    std::set<std::string> seen;
    for (const SExpr *a : init) {
        expect_list(*a, "initial fact");
        if (a->items.empty())
            fail(*a, "empty initial fact");
        Atom atom = parse_atom(*a, ctx);
        if (seen.insert(atom.to_string()).second)
            p.init.push_back(std::move(atom));
    }

    std::map<std::string, int> tags;
    if (goal_tasks) {
        auto raw = parse_tagged_tasks(*goal_tasks);
        for (const auto &r : raw) {
            TaskRef t = parse_task(*r.task, ctx);
            resolve_task(t, p.domain, *r.task);
            tags[r.tag] = static_cast<int>(p.goal.tasks.size());
            p.goal.tasks.push_back(TaggedTask{r.tag, std::move(t)});
        }
    }
    if (goal_constraints)
        p.goal.constraints = parse_constraints(*goal_constraints, tags, ctx);
    return p;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Domain load_domain(const std::string &path) {
    return parse_domain(read_file(path), path);
}

Problem load_problem(const std::string &path, const Domain &domain) {
    return parse_problem(read_file(path), domain, path);
}

std::string print_expression(const Expression &e) {
    return e.to_string();
}

namespace {

std::string typed_list(const std::vector<TypedVariable> &vars) {
    std::string out;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i)
            out += ' ';
        out += vars[i].name + " - " + vars[i].type;
    }
    return out;
}

std::string print_group(const std::vector<std::string> &tags) {
    std::string out = "(";
    for (std::size_t i = 0; i < tags.size(); ++i)
        out += (i ? " " : "") + tags[i];
    return out + ")";
}

std::string print_constraint(const Constraint &c) {
    switch (c.kind) {
    case Constraint::Kind::Series: {
        std::string out = "(series";
        for (const auto &t : c.tags)
            out += " " + t;
        return out + ")";
    }
    case Constraint::Kind::Before:
    case Constraint::Kind::After:
        return std::string("(") + to_string(c.kind) + " " + c.formula.to_string() + " " +
               print_group(c.tags) + ")";
    case Constraint::Kind::Between:
        return "(between " + c.formula.to_string() + " " + print_group(c.tags) + " " +
               print_group(c.tags2) + ")";
    }
    return "";
}

void print_network(std::ostringstream &out, const std::vector<TaggedTask> &tasks,
                   const std::vector<Constraint> &constraints, const char *tasks_kw,
                   const char *constraints_kw, const char *indent) {
    out << indent << tasks_kw << " (";
    for (std::size_t i = 0; i < tasks.size(); ++i)
        out << (i ? " " : "") << "(tag " << tasks[i].tag << " " << tasks[i].task.to_string() << ")";
    out << ")";
    if (constraints_kw) {
        out << "\n" << indent << constraints_kw << " (and";
        for (const auto &c : constraints)
            out << " " << print_constraint(c);
        out << ")";
    }
}

void print_objects(std::ostringstream &out, const TypeHierarchy &h,
                   const std::vector<std::string> &names) {
    for (const auto &o : names)
        out << " " << o << " - " << h.type_of(o);
}

} // namespace

std::string print_domain(const Domain &d) {
    std::ostringstream out;
    out << "(define (domain " << d.name << ")\n";
    out << "  (:types";
    for (const auto &t : d.hierarchy.types())
        if (t != kRootType)
            out << " " << t << " - " << *d.hierarchy.parent_of(t);
    out << ")\n";
    out << "  (:constants";
    print_objects(out, d.hierarchy, d.hierarchy.objects());
    out << ")\n";
    out << "  (:predicates";
    for (const auto &p : d.predicates) {
        out << " (" << p.name;
        if (!p.params.empty())
            out << " " << typed_list(p.params);
        out << ")";
    }
    out << ")\n";
    for (const auto &op : d.operators) {
        out << "  (:action " << op.name << "\n    :parameters (" << typed_list(op.params) << ")\n"
            << "    :precondition " << op.precondition.to_string() << "\n"
            << "    :effect " << op.effect.to_string() << ")\n";
    }
    for (const auto &m : d.methods) {
        out << "  (:method " << m.name << "\n    :parameters (" << typed_list(m.params) << ")\n";
        print_network(out, m.subtasks, m.constraints, ":expansion", ":constraints", "    ");
        out << ")\n";
    }
    out << ")\n";
    return out.str();
}

std::string print_problem(const Problem &p) {
    std::ostringstream out;
    out << "(define (problem " << p.name << ") (:domain " << p.domain.name << ")\n";
    out << "  (:objects";
    print_objects(out, p.domain.hierarchy, p.objects);
    out << ")\n  (:init";
    for (const auto &a : p.init)
        out << " " << a.to_string();
    out << ")\n  (";
    print_network(out, p.goal.tasks, p.goal.constraints, ":goal-tasks", nullptr, "");
    out << ")\n  (:goal-constraints (and";
    for (const auto &c : p.goal.constraints)
        out << " " << print_constraint(c);
    out << ")))\n";
    return out.str();
}

} // namespace htn
