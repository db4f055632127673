#include "htn/grounder.h"

#include <numeric>
#include <sstream>

namespace htn {

std::uint64_t GroundingReport::actions_before() const {
    std::uint64_t n = 0;
    for (const auto &s : operators)
        n += s.candidates;
    return n;
}

std::uint64_t GroundingReport::actions_after() const {
    std::uint64_t n = 0;
    for (const auto &s : operators)
        n += s.actions;
    return n;
}

std::uint64_t GroundingReport::methods_before() const {
    std::uint64_t n = 0;
    for (const auto &s : methods)
        n += s.candidates;
    return n;
}

std::uint64_t GroundingReport::methods_after() const {
    std::uint64_t n = 0;
    for (const auto &s : methods)
        n += s.methods;
    return n;
}

std::string GroundingReport::to_string() const {
    std::ostringstream out;
    out << "inertia\n";
    for (const auto &[name, flags] : inertia.predicates)
        out << "  " << name << " " << htn::to_string(flags.classify()) << "\n";
    out << "operators\n";
    for (const auto &s : operators)
        out << "  " << s.name << " candidates " << s.candidates << " kept " << s.kept
            << " deleted-precondition " << s.deleted_precondition << " deleted-effect "
            << s.deleted_effect << " deleted-noop " << s.deleted_noop << " actions " << s.actions
            << "\n";
    out << "methods\n";
    for (const auto &s : methods)
        out << "  " << s.name << " candidates " << s.candidates << " kept " << s.kept
            << " deleted-constraint " << s.deleted_constraint << " deleted-task "
            << s.deleted_task << " methods " << s.methods << "\n";
    out << "fixpoint-iterations " << fixpoint_iterations << "\n";
    out << "atoms\n";
    for (const auto &[name, n] : atoms)
        out << "  " << name << " " << n << "\n";
    out << "actions " << actions_before() << " -> " << actions_after() << "\n";
    out << "methods " << methods_before() << " -> " << methods_after() << "\n";
    return out.str();
}

namespace {

std::vector<int> resolve_tags(const TaskNetwork &w, const std::vector<std::string> &tags) {
    std::vector<int> out;
    for (const auto &t : tags)
        out.push_back(w.tag_index(t));
    return out;
}

void ground_goal_network(const Problem &p, const InertiaReport &inertia, const AtomSet &s0,
                         const GroundingOptions &options, GroundProblem &gp) {
    const TaskNetwork &w = p.goal;
    for (const auto &t : w.tasks) {
        GroundTask g;
        g.name = t.task.name;
        g.primitive = t.task.primitive;
        for (const auto &a : t.task.args)
            g.args.push_back(a.name);
        gp.goal_tasks.push_back(intern_task(g, gp));
        gp.goal_tags.push_back(t.tag);
    }
    const int last = static_cast<int>(w.tasks.size()) - 1;
    for (const auto &c : w.constraints) {
        GroundConstraint g;
        g.kind = c.kind;
        g.group = resolve_tags(w, c.tags);
        g.group2 = resolve_tags(w, c.tags2);
        if (!c.has_formula()) {
            g.formula = GroundFormula::truth();
            gp.root_constraints.push_back(std::move(g));
            continue;
        }
        Expression f = normalize(c.formula, p.domain.hierarchy, {});
        if (options.simplify)
            f = evaluate_inertia(f, inertia, s0);
        f = simplify_expression(f);
        if (f.is_true())
            continue;
        auto dnf = to_dnf(f, options.clause_cap, "goal constraint");
        bool at_end = std::find(g.group.begin(), g.group.end(), last) != g.group.end();
        if (c.kind == Constraint::Kind::After && at_end && dnf.size() == 1) {
            GroundFormula one = intern_formula(dnf, gp.table);
            auto merge = [](std::vector<PropId> &into, const std::vector<PropId> &from) {
                into.insert(into.end(), from.begin(), from.end());
                std::sort(into.begin(), into.end());
                into.erase(std::unique(into.begin(), into.end()), into.end());
            };
            merge(gp.goal_state_pos, one.clauses[0].pos);
            merge(gp.goal_state_neg, one.clauses[0].neg);
            continue;
        }
        g.formula = intern_formula(dnf, gp.table);
        gp.root_constraints.push_back(std::move(g));
    }
}

} // namespace

GroundingResult ground(const Problem &problem, const GroundingOptions &options) {
    GroundingResult result;
    GroundingReport &report = result.report;
    GroundProblem &gp = result.problem;
    const Domain &domain = problem.domain;
    const TypeHierarchy &h = domain.hierarchy;

    check_deadline(options);
    auto operators = normalize_operators(domain.operators, h);
    report.inertia = compute_inertia(operators, domain.predicates);
    const AtomSet s0 = make_atom_set(problem.init);
    gp.actions = ground_operators(operators, h, report.inertia, s0, options, gp.table,
                                  &report.operators);

    auto methods = prepare_methods(domain);
    const auto primitive = action_signatures(gp.actions);
    bool task_deleted = false;
    auto candidates =
        instantiate_methods(methods, h, report.inertia, s0, options,
                            options.simplify ? &primitive : nullptr, &report.methods, &task_deleted);
    candidates = simplify_methods_by_constraints(std::move(candidates), options.clause_cap,
                                                 &report.methods);
    if (options.simplify) {
        auto ts = simplify_methods_by_tasks(std::move(candidates), primitive,
                                            options.method_fixpoint, task_deleted,
                                            &report.methods);
        candidates = std::move(ts.methods);
        report.fixpoint_iterations = ts.iterations;
    }
    check_deadline(options);

    ground_goal_network(problem, report.inertia, s0, options, gp);
    add_ground_methods(candidates, gp, &report.methods);
    build_relevance(gp);

    gp.state0 = State(gp.table.size());
    for (const auto &a : problem.init)
        if (auto id = gp.table.find(a))
            gp.state0.insert(*id);
    gp.table.freeze();

    for (const auto &p : domain.predicates)
        report.atoms[p.name] = 0;
    for (std::size_t i = 0; i < gp.table.size(); ++i)
        ++report.atoms[gp.table.atom(static_cast<PropId>(i)).predicate];
    return result;
}

std::vector<std::pair<std::string, std::uint64_t>> estimate_schemas(const Domain &domain) {
    std::vector<std::pair<std::string, std::uint64_t>> out;
    for (const auto &op : domain.operators)
        out.emplace_back(op.name, estimate_grounding_size(op.params, domain.hierarchy));
    for (const auto &m : prepare_methods(domain))
        out.emplace_back(m.name, estimate_grounding_size(m.all_variables(), domain.hierarchy));
    return out;
}

} // namespace htn
