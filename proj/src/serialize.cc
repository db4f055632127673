#include "htn/serialize.h"

#include "htn/error.h"
#include "htn/sexpr.h"

#include <sstream>
#include <unordered_map>

namespace htn {

namespace {

template <class T>
std::string id_list(const std::vector<T> &ids) {
    std::string out = "(";
    for (std::size_t i = 0; i < ids.size(); ++i)
        out += (i ? " " : "") + std::to_string(ids[i]);
    return out + ")";
}

std::string tag_list(const std::vector<std::string> &tags) {
    std::string out = "(";
    for (std::size_t i = 0; i < tags.size(); ++i)
        out += (i ? " " : "") + tags[i];
    return out + ")";
}

std::string formula_ids(const GroundFormula &f) {
    std::string out = "(";
    for (std::size_t i = 0; i < f.clauses.size(); ++i) {
        out += i ? " (" : "(";
        bool first = true;
        for (PropId p : f.clauses[i].pos) {
            out += (first ? "" : " ") + std::to_string(p);
            first = false;
        }
        for (PropId p : f.clauses[i].neg) {
            out += (first ? "-" : " -") + std::to_string(p);
            first = false;
        }
        out += ")";
    }
    return out + ")";
}

std::string constraint_ids(const GroundConstraint &c) {
    std::string out = std::string("(") + to_string(c.kind);
    if (c.kind != Constraint::Kind::Series)
        out += " " + formula_ids(c.formula);
    out += " " + id_list(c.group);
    if (c.kind == Constraint::Kind::Between)
        out += " " + id_list(c.group2);
    return out + ")";
}

} // namespace

std::string write_ground_problem(const GroundProblem &gp) {
    std::ostringstream out;
    out << "propositions " << gp.table.size() << "\n";
    for (std::size_t i = 0; i < gp.table.size(); ++i)
        out << i << " " << gp.table.atom(static_cast<PropId>(i)).to_string() << "\n";
    out << "init " << id_list(gp.state0.ids()) << "\n";
    out << "tasks " << gp.tasks.size() << "\n";
    for (std::size_t i = 0; i < gp.tasks.size(); ++i)
        out << i << " " << (gp.tasks[i].primitive ? "primitive " : "compound ")
            << gp.tasks[i].to_string() << "\n";
    out << "goal-tasks " << tag_list(gp.goal_tags) << " " << id_list(gp.goal_tasks) << "\n";
    out << "goal-state " << id_list(gp.goal_state_pos) << " " << id_list(gp.goal_state_neg)
        << "\n";
    out << "goal-constraints " << gp.root_constraints.size() << "\n";
    for (const auto &c : gp.root_constraints)
        out << constraint_ids(c) << "\n";
    out << "actions " << gp.actions.size() << "\n";
    for (std::size_t i = 0; i < gp.actions.size(); ++i) {
        const auto &a = gp.actions[i];
        out << i << " " << a.signature() << " clause " << a.clause << " pre+ "
            << id_list(a.pre_pos) << " pre- " << id_list(a.pre_neg) << " eff+ "
            << id_list(a.eff_pos) << " eff- " << id_list(a.eff_neg) << "\n";
    }
    out << "methods " << gp.methods.size() << "\n";
    for (std::size_t i = 0; i < gp.methods.size(); ++i) {
        const auto &m = gp.methods[i];
        out << i << " " << m.signature() << " clause " << m.clause << " task " << m.task
            << " subtasks " << id_list(m.subtasks) << " tags " << tag_list(m.tags) << " pre+ "
            << id_list(m.pre_pos) << " pre- " << id_list(m.pre_neg) << " constraints (";
        for (std::size_t c = 0; c < m.residual_constraints.size(); ++c)
            out << (c ? " " : "") << constraint_ids(m.residual_constraints[c]);
        out << ")\n";
    }
    out << "relevance\n";
    for (std::size_t t = 0; t < gp.relevance.size(); ++t)
        out << t << " " << id_list(gp.relevance[t]) << "\n";
    return out.str();
}

std::string write_plan(const GroundProblem &gp, const Plan &plan) {
    std::string out;
    for (auto i : plan)
        out += gp.actions.at(i).signature() + "\n";
    return out;
}

std::vector<std::string> read_plan(const std::string &text, const std::string &file) {
    std::vector<std::string> out;
    for (const auto &e : read_sexprs(text, file)) {
        if (!e.is_list() || e.items.empty())
            throw ParseError(e.span, "expected (action arg...)");
        for (const auto &item : e.items)
            if (!item.is_symbol())
                throw ParseError(item.span, "expected a symbol");
        out.push_back(e.to_string());
    }
    return out;
}

Plan resolve_plan(const GroundProblem &gp, const std::vector<std::string> &signatures) {
    std::unordered_map<std::string, std::vector<std::uint32_t>> index;
    for (std::size_t i = 0; i < gp.actions.size(); ++i)
        index[gp.actions[i].signature()].push_back(static_cast<std::uint32_t>(i));
    Plan plan;
    State s = gp.state0;
    for (const auto &sig : signatures) {
        auto it = index.find(sig);
        if (it == index.end())
            throw Error("unknown action " + sig);
        std::uint32_t chosen = it->second.front();
        for (auto a : it->second) {
            if (applicable(gp.actions[a], s)) {
                chosen = a;
                break;
            }
        }
        plan.push_back(chosen);
        s = apply(gp.actions[chosen], s);
    }
    return plan;
}

std::string to_string(const GroundProblem &gp, const GroundFormula &f) {
    auto clause = [&](const GroundClause &c) {
        std::vector<std::string> lits;
        for (PropId p : c.pos)
            lits.push_back(gp.table.atom(p).to_string());
        for (PropId p : c.neg)
            lits.push_back("(not " + gp.table.atom(p).to_string() + ")");
        if (lits.empty())
            return std::string("(true)");
        if (lits.size() == 1)
            return lits[0];
        std::string out = "(and";
        for (const auto &l : lits)
            out += " " + l;
        return out + ")";
    };
    if (f.clauses.empty())
        return "(false)";
    if (f.clauses.size() == 1)
        return clause(f.clauses[0]);
    std::string out = "(or";
    for (const auto &c : f.clauses)
        out += " " + clause(c);
    return out + ")";
}

std::string to_string(const GroundProblem &gp, const GroundConstraint &c,
                      const std::vector<std::string> &tags) {
    auto group = [&](const std::vector<int> &g) {
        if (g.size() == 1)
            return tags.at(g[0]);
        std::string out = "(";
        for (std::size_t i = 0; i < g.size(); ++i)
            out += (i ? " " : "") + tags.at(g[i]);
        return out + ")";
    };
    std::string out = std::string("(") + to_string(c.kind);
    if (c.kind == Constraint::Kind::Series) {
        for (int i : c.group)
            out += " " + tags.at(i);
        return out + ")";
    }
    out += " " + to_string(gp, c.formula) + " " + group(c.group);
    if (c.kind == Constraint::Kind::Between)
        out += " " + group(c.group2);
    return out + ")";
}

namespace {

void write_node(const GroundProblem &gp, const DecompositionTrace &trace,
                const std::vector<std::vector<int>> &children, int n, int indent,
                std::ostringstream &out) {
    const TraceNode &node = trace.nodes[n];
    const std::vector<std::string> &tags =
        node.method < 0 ? gp.goal_tags : gp.methods[node.method].tags;
    out << std::string(indent, ' ');
    if (node.method < 0) {
        out << "(goal";
    } else {
        const GroundMethod &m = gp.methods[node.method];
        out << "(method " << m.signature() << " (index " << node.method << ")";
    }
    for (std::size_t i = 0; i < node.spans.size(); ++i)
        out << " (span " << tags.at(i) << " " << node.spans[i].lo << " " << node.spans[i].hi
            << ")";
    const auto &constraints =
        node.method < 0 ? gp.root_constraints : gp.methods[node.method].residual_constraints;
    if (!constraints.empty()) {
        out << " (constraints";
        for (const auto &c : constraints)
            out << " " << to_string(gp, c, tags);
        out << ")";
    }
    for (int c : children[n]) {
        out << "\n";
        write_node(gp, trace, children, c, indent + 2, out);
    }
    out << ")";
}

int to_int(const SExpr &e) {
    if (!e.is_symbol())
        throw ParseError(e.span, "expected an integer");
    try {
        std::size_t used = 0;
        int v = std::stoi(e.symbol, &used);
        if (used != e.symbol.size())
            throw std::invalid_argument(e.symbol);
        return v;
    } catch (const std::logic_error &) {
        throw ParseError(e.span, "expected an integer, got '" + e.symbol + "'");
    }
}

class TraceReader {
public:
    TraceReader(const GroundProblem &gp, DecompositionTrace &trace) : gp_(gp), trace_(trace) {}

    void read(const SExpr &e, int parent, int slot) {
        const bool root = parent < 0;
        if (root ? !e.is_form("goal") : !e.is_form("method"))
            throw ParseError(e.span, root ? "expected (goal ...)" : "expected (method ...)");
        std::size_t pos = 1;
        int method = -1;
        std::vector<TaskId> subtasks = gp_.goal_tasks;
        std::string sig;
        if (!root) {
            if (e.items.size() < 2 || !e.items[1].is_list())
                throw ParseError(e.span, "expected the method signature");
            sig = e.items[1].to_string();
            pos = 2;
        }
        std::vector<std::pair<std::string, Span>> spans;
        std::vector<const SExpr *> kids;
        for (; pos < e.items.size(); ++pos) {
            const SExpr &item = e.items[pos];
            if (item.is_form("index") && item.items.size() == 2) {
                method = to_int(item.items[1]);
            } else if (item.is_form("span") && item.items.size() == 4) {
                spans.push_back({item.items[1].symbol,
                                 Span{to_int(item.items[2]), to_int(item.items[3])}});
            } else if (item.is_form("constraints")) {
                // Informational; the ground problem is authoritative.
            } else if (item.is_form("method")) {
                kids.push_back(&item);
            } else {
                throw ParseError(item.span, "unexpected trace element");
            }
        }
        if (!root)
            method = resolve(e, sig, method, spans, parent, slot);
        if (method >= 0)
            subtasks = gp_.methods[method].subtasks;
        const auto &tags = method < 0 ? gp_.goal_tags : gp_.methods[method].tags;
        if (spans.size() != tags.size())
            throw ParseError(e.span, "expected one span per subtask");
        TraceNode node;
        node.method = method;
        node.parent = parent;
        node.parent_slot = slot;
        for (std::size_t i = 0; i < spans.size(); ++i) {
            if (spans[i].first != tags[i])
                throw ParseError(e.span, "span tag '" + spans[i].first + "' does not match '" +
                                             tags[i] + "'");
            node.spans.push_back(spans[i].second);
        }
        const int id = static_cast<int>(trace_.nodes.size());
        trace_.nodes.push_back(std::move(node));
        // Children fill the compound subtasks in order.
        std::size_t k = 0;
        for (std::size_t i = 0; i < subtasks.size() && k < kids.size(); ++i)
            if (!gp_.tasks[subtasks[i]].primitive)
                read(*kids[k++], id, static_cast<int>(i));
        if (k != kids.size())
            throw ParseError(e.span, "more child methods than compound subtasks");
    }

private:
    int resolve(const SExpr &e, const std::string &sig, int method,
                const std::vector<std::pair<std::string, Span>> &spans, int parent, int slot) {
        const TraceNode &p = trace_.nodes[parent];
        TaskId task = p.method < 0 ? gp_.goal_tasks.at(slot)
                                   : gp_.methods[p.method].subtasks.at(slot);
        auto fits = [&](int m) {
            const GroundMethod &gm = gp_.methods[m];
            if (gm.signature() != sig || gm.task != task || gm.tags.size() != spans.size())
                return false;
            for (std::size_t i = 0; i < spans.size(); ++i)
                if (gm.tags[i] != spans[i].first)
                    return false;
            return true;
        };
        if (method >= 0) {
            if (method >= static_cast<int>(gp_.methods.size()) || !fits(method))
                throw ParseError(e.span, "method index " + std::to_string(method) +
                                             " does not match " + sig);
            return method;
        }
        for (auto m : gp_.relevance.at(task))
            if (fits(static_cast<int>(m)))
                return static_cast<int>(m);
        throw ParseError(e.span, "no ground method " + sig + " decomposes " +
                                     gp_.tasks[task].to_string());
    }

    const GroundProblem &gp_;
    DecompositionTrace &trace_;
};

} // namespace

std::string write_trace(const GroundProblem &gp, const DecompositionTrace &trace) {
    std::ostringstream out;
    out << "(trace\n";
    if (!trace.nodes.empty())
        write_node(gp, trace, trace.children(), 0, 2, out);
    out << ")\n";
    return out.str();
}

DecompositionTrace read_trace(const GroundProblem &gp, const std::string &text,
                              const std::string &file) {
    auto forms = read_sexprs(text, file);
    if (forms.size() != 1 || !forms[0].is_form("trace"))
        throw ParseError(forms.empty() ? SourceSpan{file} : forms[0].span,
                         "expected a single (trace ...) form");
    DecompositionTrace trace;
    const SExpr &t = forms[0];
    if (t.items.size() != 2)
        throw ParseError(t.span, "expected (trace (goal ...))");
    TraceReader(gp, trace).read(t.items[1], -1, -1);
    return trace;
}

} // namespace htn
