#include "htn/ground_methods.h"

#include "binding_enumerator.h"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace htn {

using detail::BindingEnumerator;
using detail::binding_depth;
using detail::top_level_conjuncts;

std::vector<MethodSchema> normalize_methods(const std::vector<MethodSchema> &methods,
                                            const TypeHierarchy &hierarchy) {
    std::vector<MethodSchema> out;
    for (const auto &m : methods) {
        std::vector<std::string> scope;
        for (const auto &v : m.all_variables())
            scope.push_back(v.name);
        MethodSchema n = m;
        for (auto &c : n.constraints)
            if (c.has_formula())
                c.formula = normalize(c.formula, hierarchy, scope);
        out.push_back(std::move(n));
    }
    return out;
}

namespace {

// Keeps the types that have no (strict) subtype among `types`.
std::vector<std::string> most_specific(const std::set<std::string> &types,
                                       const TypeHierarchy &h) {
    std::vector<std::string> out;
    for (const auto &a : types) {
        bool has_sub = std::any_of(types.begin(), types.end(), [&](const std::string &b) {
            return b != a && h.is_subtype(b, a);
        });
        if (!has_sub)
            out.push_back(a);
    }
    return out;
}

std::string join(const std::vector<std::string> &v) {
    std::string out;
    for (const auto &s : v)
        out += (out.empty() ? "" : ", ") + s;
    return out;
}

std::vector<std::string> reduce(const std::set<std::string> &types, const TypeHierarchy &h,
                                const MethodSchema &m, const std::string &var,
                                const char *source) {
    auto kept = most_specific(types, h);
    if (kept.size() > 1)
        throw TypingError("unrelated types {" + join(kept) + "} inferred from " + source +
                          " for " + var + " in method '" + m.name + "'");
    return kept;
}

} // namespace

MethodSchema infer_method_var_types(const MethodSchema &m, const Domain &domain) {
    const TypeHierarchy &h = domain.hierarchy;
    MethodSchema out = m;
    for (auto &fv : out.free_vars) {
        if (!fv.type.empty())
            continue;
        std::set<std::string> from_tasks;
        for (const auto &st : m.subtasks) {
            for (std::size_t i = 0; i < st.task.args.size(); ++i) {
                const Term &t = st.task.args[i];
                if (!t.is_variable() || t.name != fv.name)
                    continue;
                if (st.task.primitive) {
                    if (const auto *op = domain.find_operator(st.task.name))
                        from_tasks.insert(op->params.at(i).type);
                } else {
                    for (const auto *rm : domain.methods_for(st.task.name))
                        from_tasks.insert(rm->params.at(i).type);
                }
            }
        }
        std::set<std::string> from_constraints;
        for (const auto &c : m.constraints) {
            if (!c.has_formula())
                continue;
            std::vector<Atom> atoms;
            collect_atoms(c.formula, atoms);
            for (const auto &a : atoms) {
                const auto *sig = domain.find_predicate(a.predicate);
                if (!sig)
                    continue;
                for (std::size_t i = 0; i < a.args.size(); ++i)
                    if (a.args[i].is_variable() && a.args[i].name == fv.name)
                        from_constraints.insert(sig->params.at(i).type);
            }
        }
        std::set<std::string> merged;
        for (const auto &t : reduce(from_tasks, h, m, fv.name, "subtasks"))
            merged.insert(t);
        for (const auto &t : reduce(from_constraints, h, m, fv.name, "constraints"))
            merged.insert(t);
        auto kept = most_specific(merged, h);
        if (kept.empty())
            throw TypingError("cannot infer a type for " + fv.name + " in method '" + m.name + "'");
        if (kept.size() > 1)
            throw TypingError("unrelated types {" + join(kept) + "} inferred for " + fv.name +
                              " in method '" + m.name + "'");
        fv.type = kept.front();
    }
    return out;
}

std::vector<MethodSchema> prepare_methods(const Domain &domain) {
    std::vector<MethodSchema> out;
    for (const auto &m : normalize_methods(domain.methods, domain.hierarchy))
        out.push_back(infer_method_var_types(m, domain));
    return out;
}

std::string to_string(const CandidateConstraint &c, const std::vector<std::string> &tags) {
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
    out += " " + c.formula.to_string() + " " + group(c.group);
    if (c.kind == Constraint::Kind::Between)
        out += " " + group(c.group2);
    return out + ")";
}

bool is_anchored_before(const CandidateConstraint &c) {
    return c.kind == Constraint::Kind::Before &&
           std::find(c.group.begin(), c.group.end(), 0) != c.group.end();
}

std::unordered_set<std::string> action_signatures(const std::vector<GroundAction> &actions) {
    std::unordered_set<std::string> out;
    for (const auto &a : actions)
        out.insert(a.signature());
    return out;
}

namespace {

std::size_t task_depth(const TaskRef &t, const std::vector<TypedVariable> &vars) {
    std::size_t depth = 0;
    for (const auto &a : t.args) {
        if (!a.is_variable())
            continue;
        auto it = std::find_if(vars.begin(), vars.end(),
                               [&](const TypedVariable &v) { return v.name == a.name; });
        if (it == vars.end())
            throw TypingError("unbound variable " + a.name + " in task " + t.to_string());
        depth = std::max(depth, static_cast<std::size_t>(it - vars.begin()) + 1);
    }
    return depth;
}

GroundTask ground_task(const TaskRef &t, const Substitution &sigma) {
    GroundTask g;
    g.name = t.name;
    g.primitive = t.primitive;
    for (const auto &a : t.args) {
        if (a.is_variable())
            g.args.push_back(*sigma.lookup(a.name));
        else
            g.args.push_back(a.name);
    }
    return g;
}

std::vector<int> resolve_tags(const MethodSchema &m, const std::vector<std::string> &tags) {
    std::vector<int> out;
    for (const auto &t : tags)
        out.push_back(m.tag_index(t));
    return out;
}

} // namespace

std::vector<MethodCandidate>
instantiate_methods(const std::vector<MethodSchema> &methods, const TypeHierarchy &hierarchy,
                    const InertiaReport &inertia, const AtomSet &s0,
                    const GroundingOptions &options,
                    const std::unordered_set<std::string> *primitive,
                    std::vector<MethodStats> *stats, bool *task_deleted) {
    std::vector<MethodCandidate> out;
    const bool eager = options.simplify && options.prune_early;
    const bool check_tasks = eager && primitive;
    std::size_t ticks = 0;
    auto tick = [&]() {
        if ((++ticks & 4095) == 0)
            check_deadline(options);
    };
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const MethodSchema &m = methods[mi];
        const auto vars = m.all_variables();
        for (const auto &v : vars)
            if (v.type.empty())
                throw TypingError("variable " + v.name + " of method '" + m.name +
                                  "' has no type");
        const std::size_t k = vars.size();
        MethodStats st;
        st.name = m.name;
        BindingEnumerator en(vars, hierarchy);
        st.candidates = en.total();

        // (constraint, conjunct) pairs staged by binding depth.
        std::vector<std::vector<Expression>> parts(m.constraints.size());
        std::vector<std::vector<Expression>> values(m.constraints.size());
        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_depth(k + 1);
        for (std::size_t c = 0; c < m.constraints.size(); ++c) {
            const Constraint &con = m.constraints[c];
            if (!con.has_formula() || con.formula.is_true())
                continue;
            parts[c] = top_level_conjuncts(con.formula);
            values[c].resize(parts[c].size());
            for (std::size_t j = 0; j < parts[c].size(); ++j)
                by_depth[binding_depth(parts[c][j], vars)].push_back({c, j});
        }
        std::vector<std::vector<std::size_t>> tasks_by_depth(k + 1);
        for (std::size_t s = 0; s < m.subtasks.size(); ++s)
            if (m.subtasks[s].task.primitive)
                tasks_by_depth[task_depth(m.subtasks[s].task, vars)].push_back(s);

        auto stage = [&](std::size_t d, const Substitution &sigma) {
            if (!eager && d != k)
                return true;
            const std::size_t lo = eager ? d : 0;
            for (std::size_t depth = lo; depth <= d; ++depth) {
                for (auto [c, j] : by_depth[depth]) {
                    Expression g = substitute(parts[c][j], sigma);
                    if (options.simplify)
                        g = simplify_expression(evaluate_inertia(g, inertia, s0));
                    if (eager && g.is_false()) {
                        st.deleted_constraint += en.subtree_size(d);
                        return false;
                    }
                    values[c][j] = std::move(g);
                }
                if (!check_tasks)
                    continue;
                for (std::size_t s : tasks_by_depth[depth]) {
                    if (!primitive->count(ground_task(m.subtasks[s].task, sigma).to_string())) {
                        st.deleted_task += en.subtree_size(d);
                        if (task_deleted)
                            *task_deleted = true;
                        return false;
                    }
                }
            }
            return true;
        };
        auto leaf = [&](const Substitution &sigma) {
            MethodCandidate c;
            c.schema = mi;
            c.name = m.name;
            for (const auto &v : vars)
                c.args.push_back(*sigma.lookup(v.name));
            c.num_params = m.params.size();
            c.task.name = m.name;
            c.task.args.assign(c.args.begin(), c.args.begin() + c.num_params);
            for (const auto &st2 : m.subtasks) {
                c.subtasks.push_back(ground_task(st2.task, sigma));
                c.tags.push_back(st2.tag);
            }
            for (std::size_t ci = 0; ci < m.constraints.size(); ++ci) {
                const Constraint &con = m.constraints[ci];
                CandidateConstraint cc;
                cc.kind = con.kind;
                cc.group = resolve_tags(m, con.tags);
                cc.group2 = resolve_tags(m, con.tags2);
                if (con.has_formula()) {
                    cc.formula = Expression::conjunction(values[ci]);
                    if (options.simplify && !eager)
                        cc.formula = simplify_expression(cc.formula);
                }
                c.constraints.push_back(std::move(cc));
            }
            out.push_back(std::move(c));
        };
        en.run(stage, leaf, tick);
        if (stats)
            stats->push_back(st);
    }
    return out;
}

namespace {

MethodStats &stats_at(std::vector<MethodStats> *stats, std::size_t schema) {
    static MethodStats scratch;
    if (!stats || schema >= stats->size())
        return scratch;
    return (*stats)[schema];
}

} // namespace

std::vector<MethodCandidate> simplify_methods_by_constraints(std::vector<MethodCandidate> candidates,
                                                             std::size_t clause_cap,
                                                             std::vector<MethodStats> *stats) {
    std::vector<MethodCandidate> out;
    for (auto &cand : candidates) {
        std::vector<CandidateConstraint> kept;
        std::vector<Expression> anchored;
        bool deleted = false;
        const std::string context = "constraint of method '" + cand.name + "'";
        for (auto &c : cand.constraints) {
            if (c.kind == Constraint::Kind::Series) {
                kept.push_back(std::move(c));
                continue;
            }
            c.formula = simplify_expression(c.formula);
            if (c.formula.is_true())
                continue;
            if (c.formula.is_false()) {
                deleted = true;
                break;
            }
            if (is_anchored_before(c)) {
                anchored.push_back(c.formula);
                continue;
            }
            c.dnf = to_dnf(c.formula, clause_cap, context);
            if (c.dnf.empty()) {
                deleted = true;
                break;
            }
            kept.push_back(std::move(c));
        }
        if (!deleted) {
            cand.precondition = to_dnf(Expression::conjunction(anchored), clause_cap, context);
            deleted = cand.precondition.empty();
        }
        if (deleted) {
            ++stats_at(stats, cand.schema).deleted_constraint;
            continue;
        }
        cand.constraints = std::move(kept);
        out.push_back(std::move(cand));
    }
    return out;
}

TaskSimplification simplify_methods_by_tasks(std::vector<MethodCandidate> candidates,
                                             const std::unordered_set<std::string> &primitive,
                                             bool fixpoint, bool already_deleted,
                                             std::vector<MethodStats> *stats) {
    TaskSimplification result;
    std::vector<bool> alive(candidates.size(), true);
    auto remove = [&](std::size_t i) {
        alive[i] = false;
        ++stats_at(stats, candidates[i].schema).deleted_task;
    };

    bool deleted = already_deleted;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (const auto &t : candidates[i].subtasks) {
            if (t.primitive && !primitive.count(t.to_string())) {
                remove(i);
                deleted = true;
                break;
            }
        }
    }
    if (deleted)
        result.iterations = 1;

    if (fixpoint) {
        std::unordered_map<std::string, std::size_t> decomposers;
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (alive[i])
                ++decomposers[candidates[i].task.to_string()];
        for (int sweep = 2;; ++sweep) {
            // Decide every deletion of this sweep against the counts at its start.
            std::vector<std::size_t> doomed;
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                if (!alive[i])
                    continue;
                for (const auto &t : candidates[i].subtasks) {
                    if (t.primitive)
                        continue;
                    auto it = decomposers.find(t.to_string());
                    if (it == decomposers.end() || it->second == 0) {
                        doomed.push_back(i);
                        break;
                    }
                }
            }
            if (doomed.empty())
                break;
            for (std::size_t i : doomed) {
                remove(i);
                --decomposers[candidates[i].task.to_string()];
            }
            result.iterations = sweep;
        }
    }

    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (alive[i])
            result.methods.push_back(std::move(candidates[i]));
    return result;
}

TaskId intern_task(const GroundTask &task, GroundProblem &gp) {
    auto [it, inserted] = gp.task_index.emplace(task.to_string(), static_cast<TaskId>(gp.tasks.size()));
    if (inserted)
        gp.tasks.push_back(task);
    return it->second;
}

namespace {

std::vector<PropId> intern_ids(const std::vector<Atom> &atoms, PropositionTable &table) {
    std::vector<PropId> ids;
    for (const auto &a : atoms)
        ids.push_back(table.intern(a));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

GroundClause intern_clause(const Clause &clause, PropositionTable &table) {
    std::vector<Atom> pos, neg;
    for (const auto &lit : clause)
        (lit.positive ? pos : neg).push_back(lit.atom);
    return GroundClause{intern_ids(pos, table), intern_ids(neg, table)};
}

} // namespace

GroundFormula intern_formula(const std::vector<Clause> &dnf, PropositionTable &table) {
    GroundFormula f;
    for (const auto &clause : dnf)
        f.clauses.push_back(intern_clause(clause, table));
    return f;
}

void add_ground_methods(const std::vector<MethodCandidate> &candidates, GroundProblem &gp,
                        std::vector<MethodStats> *stats) {
    for (const auto &cand : candidates) {
        MethodStats &st = stats_at(stats, cand.schema);
        ++st.kept;
        TaskId head = intern_task(cand.task, gp);
        std::vector<TaskId> subtasks;
        for (const auto &t : cand.subtasks)
            subtasks.push_back(intern_task(t, gp));
        std::vector<GroundConstraint> residual;
        for (const auto &c : cand.constraints) {
            GroundConstraint g;
            g.kind = c.kind;
            g.formula = c.kind == Constraint::Kind::Series ? GroundFormula::truth()
                                                           : intern_formula(c.dnf, gp.table);
            g.group = c.group;
            g.group2 = c.group2;
            residual.push_back(std::move(g));
        }
        int index = 0;
        for (const auto &clause : cand.precondition) {
            GroundMethod m;
            m.name = cand.name;
            m.args = cand.args;
            m.num_params = cand.num_params;
            m.clause = index++;
            m.task = head;
            m.subtasks = subtasks;
            m.tags = cand.tags;
            GroundClause pre = intern_clause(clause, gp.table);
            m.pre_pos = std::move(pre.pos);
            m.pre_neg = std::move(pre.neg);
            m.residual_constraints = residual;
            gp.methods.push_back(std::move(m));
            ++st.methods;
        }
    }
}

void build_relevance(GroundProblem &gp) {
    gp.relevance.assign(gp.tasks.size(), {});
    std::unordered_map<std::string, std::vector<std::uint32_t>> by_signature;
    for (std::size_t i = 0; i < gp.actions.size(); ++i)
        by_signature[gp.actions[i].signature()].push_back(static_cast<std::uint32_t>(i));
    for (std::size_t t = 0; t < gp.tasks.size(); ++t) {
        if (!gp.tasks[t].primitive)
            continue;
        auto it = by_signature.find(gp.tasks[t].to_string());
        if (it != by_signature.end())
            gp.relevance[t] = it->second;
    }
    for (std::size_t i = 0; i < gp.methods.size(); ++i)
        gp.relevance[gp.methods[i].task].push_back(static_cast<std::uint32_t>(i));
}

} // namespace htn
