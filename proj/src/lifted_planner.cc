#include "htn/planner.h"

#include "htn/ground_actions.h"
#include "htn/ground_methods.h"

#include <chrono>
#include <functional>
#include <limits>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace htn {

namespace {

constexpr std::uint32_t kNil = std::numeric_limits<std::uint32_t>::max();

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h * 0xff51afd7ed558ccdULL;
}

enum class Tri { False, True, Unknown };

struct LiftedTask {
    std::string name;
    std::vector<std::string> args;
    bool primitive = false;

    std::string key() const {
        std::string out = "(" + name;
        for (const auto &a : args)
            out += " " + a;
        return out + ")";
    }
};

// Values of the first `bound` variables of `vars`.
struct Binding {
    const std::vector<TypedVariable> *vars = nullptr;
    std::vector<std::string> values;
    std::size_t bound = 0;

    const std::string *lookup(const std::string &var) const {
        for (std::size_t i = 0; i < bound; ++i)
            if ((*vars)[i].name == var)
                return &values[i];
        return nullptr;
    }
};

// Ground key of `a` under `b`, or nothing if a variable is still open.
bool atom_key(const Atom &a, const Binding &b, std::string &out) {
    out = "(" + a.predicate;
    for (const auto &t : a.args) {
        out += ' ';
        if (!t.is_variable()) {
            out += t.name;
            continue;
        }
        const std::string *v = b.lookup(t.name);
        if (!v)
            return false;
        out += *v;
    }
    out += ')';
    return true;
}

using AtomStore = std::unordered_set<std::string>;

Tri eval(const Expression &e, const Binding &b, const AtomStore &s) {
    using Kind = Expression::Kind;
    switch (e.kind) {
    case Kind::True:
        return Tri::True;
    case Kind::False:
        return Tri::False;
    case Kind::Atom: {
        std::string key;
        if (!atom_key(e.atom, b, key))
            return Tri::Unknown;
        return s.count(key) ? Tri::True : Tri::False;
    }
    case Kind::Not: {
        Tri v = eval(e.children.front(), b, s);
        return v == Tri::Unknown ? v : (v == Tri::True ? Tri::False : Tri::True);
    }
    case Kind::And:
    case Kind::Or: {
        const Tri absorbing = e.kind == Kind::And ? Tri::False : Tri::True;
        bool unknown = false;
        for (const auto &c : e.children) {
            Tri v = eval(c, b, s);
            if (v == absorbing)
                return v;
            unknown = unknown || v == Tri::Unknown;
        }
        if (unknown)
            return Tri::Unknown;
        return e.kind == Kind::And ? Tri::True : Tri::False;
    }
    default:
        throw GroundingError("formula is not normalized: " + e.to_string());
    }
}

struct LiftedMethod {
    const MethodSchema *schema = nullptr;
    std::vector<TypedVariable> vars;
    Expression precondition; // conjunction of the anchored befores
    std::vector<const Constraint *> residual;
    std::vector<std::vector<int>> groups;  // per residual constraint
    std::vector<std::vector<int>> groups2;
};

struct Cell {
    bool end = false;
    std::uint32_t task = 0; // into the task arena
    int node = 0;
    int slot = 0;
    std::uint32_t next = kNil;
    std::uint64_t hash = 0;
};

struct Node {
    int method = -1; // into methods_; -1 for the goal network
    int parent = -1;
    int slot = -1;
    std::vector<std::string> values;
    std::vector<Span> spans;
};

struct Effects {
    std::vector<std::string> add;
    std::vector<std::string> del;
};

struct Frame {
    std::uint32_t cell = kNil;
    std::size_t undo_size = 0;
    std::size_t plan_size = 0;
    std::size_t nodes_size = 0;
    std::size_t arena_size = 0;
    std::size_t tasks_size = 0;
    std::size_t schema_pos = 0;
    bool bindings_ready = false;
    std::vector<std::vector<std::string>> bindings;
    std::size_t binding_pos = 0;
    std::uint64_t key = 0;
    bool keyed = false;
};

class LiftedShop {
public:
    LiftedShop(const Problem &p, const SearchLimits &limits)
        : problem_(p), h_(p.domain.hierarchy), limits_(limits) {
        operators_ = normalize_operators(p.domain.operators, h_);
        schemas_ = prepare_methods(p.domain);
        for (std::size_t i = 0; i < operators_.size(); ++i)
            op_index_[operators_[i].name] = i;
        for (std::size_t i = 0; i < schemas_.size(); ++i) {
            const MethodSchema &m = schemas_[i];
            LiftedMethod lm;
            lm.schema = &m;
            lm.vars = m.all_variables();
            std::vector<Expression> anchored;
            for (const auto &c : m.constraints) {
                const bool at_first = !m.subtasks.empty() &&
                    std::find(c.tags.begin(), c.tags.end(), m.subtasks[0].tag) != c.tags.end();
                if (c.kind == Constraint::Kind::Before && at_first) {
                    anchored.push_back(c.formula);
                    continue;
                }
                lm.residual.push_back(&c);
                lm.groups.push_back(tag_positions(m, c.tags));
                lm.groups2.push_back(tag_positions(m, c.tags2));
                has_residuals_ = true;
            }
            lm.precondition = Expression::conjunction(std::move(anchored));
            by_task_[m.name].push_back(i);
            methods_.push_back(std::move(lm));
        }
        for (const auto &c : p.goal.constraints) {
            Constraint n = c;
            if (n.has_formula())
                n.formula = normalize(n.formula, h_);
            root_constraints_.push_back(std::move(n));
            has_residuals_ = true;
        }
        for (const auto &c : root_constraints_) {
            std::vector<int> g, g2;
            for (const auto &t : c.tags)
                g.push_back(p.goal.tag_index(t));
            for (const auto &t : c.tags2)
                g2.push_back(p.goal.tag_index(t));
            root_groups_.push_back(g);
            root_groups2_.push_back(g2);
        }
        for (const auto &a : p.init)
            state_.insert(a.to_string());
        for (const auto &a : state_)
            state_hash_ ^= mix(0, std::hash<std::string>{}(a));
        init_ = state_;
    }

    LiftedResult run() {
        const auto start = std::chrono::steady_clock::now();
        deadline_ = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                std::chrono::duration<double>(limits_.timeout_seconds));
        LiftedResult result;
        result.status = search();
        result.stats = stats_;
        result.stats.search_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        if (result.status == SearchStatus::Solved)
            result.plan = plan_;
        return result;
    }

private:
    static std::vector<int> tag_positions(const MethodSchema &m,
                                          const std::vector<std::string> &tags) {
        std::vector<int> out;
        for (const auto &t : tags)
            out.push_back(m.tag_index(t));
        return out;
    }

    const std::vector<std::string> &instances(const std::string &type) {
        auto it = instances_.find(type);
        if (it == instances_.end())
            it = instances_.emplace(type, h_.instances_of(type)).first;
        return it->second;
    }

    bool typed_ok(const std::string &constant, const std::string &type) const {
        return h_.has_object(constant) && h_.is_subtype(h_.type_of(constant), type);
    }

    std::uint32_t push_cell(Cell c) {
        c.hash = c.next == kNil ? 0 : arena_[c.next].hash;
        if (!c.end)
            c.hash = mix(c.hash, std::hash<std::string>{}(tasks_[c.task].key()));
        arena_.push_back(c);
        return static_cast<std::uint32_t>(arena_.size() - 1);
    }

    bool timed_out() {
        if ((++ticks_ & 4095) != 0)
            return false;
        return std::chrono::steady_clock::now() >= deadline_;
    }

    void set_atom(const std::string &a, bool present) {
        bool has = state_.count(a) > 0;
        if (has == present)
            return;
        if (present)
            state_.insert(a);
        else
            state_.erase(a);
        state_hash_ ^= mix(0, std::hash<std::string>{}(a));
        undo_.push_back({a, has});
    }

    void undo_to(std::size_t size) {
        while (undo_.size() > size) {
            auto [a, had] = undo_.back();
            undo_.pop_back();
            if (had)
                state_.insert(a);
            else
                state_.erase(a);
            state_hash_ ^= mix(0, std::hash<std::string>{}(a));
        }
    }

    // Binds the operator against the task; false if it cannot be applied.
    bool apply_primitive(const LiftedTask &t) {
        auto it = op_index_.find(t.name);
        if (it == op_index_.end())
            return false;
        const OperatorSchema &op = operators_[it->second];
        if (op.params.size() != t.args.size())
            return false;
        Binding b{&op.params, t.args, t.args.size()};
        for (std::size_t i = 0; i < t.args.size(); ++i)
            if (!typed_ok(t.args[i], op.params[i].type))
                return false;
        if (eval(op.precondition, b, state_) != Tri::True)
            return false;
        Effects eff;
        std::vector<Expression> lits =
            op.effect.kind == Expression::Kind::And ? op.effect.children
                                                    : std::vector<Expression>{op.effect};
        for (const auto &l : lits) {
            if (l.is_true())
                continue;
            std::string key;
            if (l.is_atom()) {
                atom_key(l.atom, b, key);
                eff.add.push_back(key);
            } else if (l.kind == Expression::Kind::Not) {
                atom_key(l.children.front().atom, b, key);
                eff.del.push_back(key);
            } else {
                return false;
            }
        }
        // A contradictory effect has no ground counterpart.
        for (const auto &a : eff.add)
            if (std::find(eff.del.begin(), eff.del.end(), a) != eff.del.end())
                return false;
        for (const auto &d : eff.del)
            set_atom(d, false);
        for (const auto &a : eff.add)
            set_atom(a, true);
        plan_.push_back(t.key());
        effects_.push_back(std::move(eff));
        return true;
    }

    // All free-variable bindings of method `mi` for task `t` whose anchored
    // befores hold now, in enumeration order.
    std::vector<std::vector<std::string>> bindings_for(std::size_t mi, const LiftedTask &t) {
        std::vector<std::vector<std::string>> out;
        const LiftedMethod &lm = methods_[mi];
        const auto &params = lm.schema->params;
        if (params.size() != t.args.size())
            return out;
        for (std::size_t i = 0; i < params.size(); ++i)
            if (!typed_ok(t.args[i], params[i].type))
                return out;
        Binding b{&lm.vars, std::vector<std::string>(lm.vars.size()), params.size()};
        std::copy(t.args.begin(), t.args.end(), b.values.begin());
        std::function<void(std::size_t)> rec = [&](std::size_t d) {
            Tri v = eval(lm.precondition, b, state_);
            if (v == Tri::False)
                return;
            if (d == lm.vars.size()) {
                if (v == Tri::True)
                    out.push_back(b.values);
                return;
            }
            for (const auto &c : instances(lm.vars[d].type)) {
                b.values[d] = c;
                b.bound = d + 1;
                rec(d + 1);
            }
            b.bound = d;
        };
        rec(params.size());
        return out;
    }

    LiftedTask ground_subtask(const TaskRef &ref, const Binding &b) const {
        LiftedTask t;
        t.name = ref.name;
        t.primitive = ref.primitive;
        for (const auto &a : ref.args)
            t.args.push_back(a.is_variable() ? *b.lookup(a.name) : a.name);
        return t;
    }

    bool advance() {
        while (head_ != kNil) {
            const Cell c = arena_[head_];
            if (c.end) {
                const Node &n = nodes_[c.node];
                nodes_[n.parent].spans[n.slot].hi = static_cast<int>(plan_.size());
                head_ = c.next;
                continue;
            }
            const LiftedTask &t = tasks_[c.task];
            if (!t.primitive)
                return true;
            Span &span = nodes_[c.node].spans[c.slot];
            span.lo = static_cast<int>(plan_.size());
            if (!apply_primitive(t))
                return false;
            span.hi = span.lo + 1;
            ++stats_.nodes_expanded;
            head_ = c.next;
        }
        return leaf_ok();
    }

    bool open_frame() {
        Frame f;
        f.cell = head_;
        f.undo_size = undo_.size();
        f.plan_size = plan_.size();
        f.nodes_size = nodes_.size();
        f.arena_size = arena_.size();
        f.tasks_size = tasks_.size();
        if (limits_.loop_check) {
            f.key = mix(state_hash_, arena_[head_].hash);
            if (!on_path_.insert(f.key).second) {
                ++stats_.loops_pruned;
                return false;
            }
            f.keyed = true;
        }
        frames_.push_back(std::move(f));
        stats_.max_depth = std::max<std::uint64_t>(stats_.max_depth, frames_.size());
        return true;
    }

    void pop_frame() {
        if (frames_.back().keyed)
            on_path_.erase(frames_.back().key);
        frames_.pop_back();
    }

    void restore(const Frame &f) {
        undo_to(f.undo_size);
        plan_.resize(f.plan_size);
        effects_.resize(f.plan_size);
        nodes_.resize(f.nodes_size);
        arena_.resize(f.arena_size);
        tasks_.resize(f.tasks_size);
    }

    bool next_method() {
        Frame &f = frames_.back();
        restore(f);
        const Cell task_cell = arena_[f.cell];
        const LiftedTask task = tasks_[task_cell.task];
        auto rel = by_task_.find(task.name);
        if (rel == by_task_.end())
            return false;
        while (f.schema_pos < rel->second.size()) {
            const std::size_t mi = rel->second[f.schema_pos];
            if (!f.bindings_ready) {
                f.bindings = bindings_for(mi, task);
                f.binding_pos = 0;
                f.bindings_ready = true;
            }
            if (f.binding_pos == f.bindings.size()) {
                ++f.schema_pos;
                f.bindings_ready = false;
                continue;
            }
            const auto &values = f.bindings[f.binding_pos++];
            const LiftedMethod &lm = methods_[mi];
            Binding b{&lm.vars, values, values.size()};

            nodes_[task_cell.node].spans[task_cell.slot].lo = static_cast<int>(plan_.size());
            const int node = static_cast<int>(nodes_.size());
            Node n;
            n.method = static_cast<int>(mi);
            n.parent = task_cell.node;
            n.slot = task_cell.slot;
            n.values = values;
            n.spans.assign(lm.schema->subtasks.size(), Span{});
            nodes_.push_back(std::move(n));

            Cell end;
            end.end = true;
            end.node = node;
            end.next = task_cell.next;
            std::uint32_t h = push_cell(end);
            for (std::size_t i = lm.schema->subtasks.size(); i-- > 0;) {
                tasks_.push_back(ground_subtask(lm.schema->subtasks[i].task, b));
                Cell c;
                c.task = static_cast<std::uint32_t>(tasks_.size() - 1);
                c.node = node;
                c.slot = static_cast<int>(i);
                c.next = h;
                h = push_cell(c);
            }
            head_ = h;
            ++stats_.nodes_expanded;
            return true;
        }
        return false;
    }

    // Residual constraints are checked on the replayed state sequence.
    bool leaf_ok() {
        if (!has_residuals_)
            return true;
        std::vector<AtomStore> states{init_};
        for (const auto &e : effects_) {
            AtomStore s = states.back();
            for (const auto &d : e.del)
                s.erase(d);
            for (const auto &a : e.add)
                s.insert(a);
            states.push_back(std::move(s));
        }
        for (const auto &n : nodes_) {
            if (n.method < 0) {
                Binding none{nullptr, {}, 0};
                for (std::size_t i = 0; i < root_constraints_.size(); ++i)
                    if (!holds(root_constraints_[i], root_groups_[i], root_groups2_[i], n, none,
                               states))
                        return false;
                continue;
            }
            const LiftedMethod &lm = methods_[n.method];
            Binding b{&lm.vars, n.values, n.values.size()};
            for (std::size_t i = 0; i < lm.residual.size(); ++i)
                if (!holds(*lm.residual[i], lm.groups[i], lm.groups2[i], n, b, states))
                    return false;
        }
        return true;
    }

    static bool holds(const Constraint &c, const std::vector<int> &g, const std::vector<int> &g2,
                      const Node &n, const Binding &b, const std::vector<AtomStore> &states) {
        auto first_lo = [&](const std::vector<int> &group) {
            int lo = n.spans.at(group.front()).lo;
            for (int i : group)
                lo = std::min(lo, n.spans.at(i).lo);
            return lo;
        };
        auto last_hi = [&](const std::vector<int> &group) {
            int hi = n.spans.at(group.front()).hi;
            for (int i : group)
                hi = std::max(hi, n.spans.at(i).hi);
            return hi;
        };
        auto at = [&](int s) { return eval(c.formula, b, states.at(s)) == Tri::True; };
        switch (c.kind) {
        case Constraint::Kind::Series:
            for (std::size_t i = 0; i + 1 < g.size(); ++i)
                if (n.spans.at(g[i]).hi > n.spans.at(g[i + 1]).lo)
                    return false;
            return true;
        case Constraint::Kind::Before:
            return at(first_lo(g));
        case Constraint::Kind::After:
            return at(last_hi(g));
        case Constraint::Kind::Between:
            for (int s = last_hi(g), to = first_lo(g2); s <= to; ++s)
                if (!at(s))
                    return false;
            return true;
        }
        return true;
    }

    SearchStatus search() {
        if (limits_.timeout_seconds <= 0)
            return SearchStatus::Timeout;
        Node root;
        root.spans.assign(problem_.goal.tasks.size(), Span{});
        nodes_.push_back(std::move(root));
        head_ = kNil;
        for (std::size_t i = problem_.goal.tasks.size(); i-- > 0;) {
            const TaskRef &ref = problem_.goal.tasks[i].task;
            LiftedTask t;
            t.name = ref.name;
            t.primitive = ref.primitive;
            for (const auto &a : ref.args)
                t.args.push_back(a.name);
            tasks_.push_back(std::move(t));
            Cell c;
            c.task = static_cast<std::uint32_t>(tasks_.size() - 1);
            c.node = 0;
            c.slot = static_cast<int>(i);
            c.next = head_;
            head_ = push_cell(c);
        }

        bool forward = true;
        while (true) {
            if (timed_out())
                return SearchStatus::Timeout;
            if (forward) {
                if (advance()) {
                    if (head_ == kNil)
                        return SearchStatus::Solved;
                    if (frames_.size() >= limits_.max_depth) {
                        cut_ = true;
                        forward = false;
                    } else if (open_frame()) {
                        forward = next_method();
                        if (!forward)
                            pop_frame();
                    } else {
                        forward = false;
                    }
                } else {
                    forward = false;
                }
                if (!forward)
                    ++stats_.backtracks;
                continue;
            }
            if (frames_.empty())
                return cut_ ? SearchStatus::DepthExceeded : SearchStatus::Failure;
            if (next_method()) {
                forward = true;
            } else {
                pop_frame();
                ++stats_.backtracks;
            }
        }
    }

    const Problem &problem_;
    const TypeHierarchy &h_;
    const SearchLimits &limits_;
    std::vector<OperatorSchema> operators_;
    std::vector<MethodSchema> schemas_;
    std::vector<LiftedMethod> methods_;
    std::unordered_map<std::string, std::size_t> op_index_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_task_;
    std::map<std::string, std::vector<std::string>> instances_;
    std::vector<Constraint> root_constraints_;
    std::vector<std::vector<int>> root_groups_, root_groups2_;
    bool has_residuals_ = false;

    std::chrono::steady_clock::time_point deadline_;
    bool cut_ = false;
    std::uint64_t ticks_ = 0;

    AtomStore init_;
    AtomStore state_;
    std::uint64_t state_hash_ = 0;
    std::vector<std::pair<std::string, bool>> undo_;
    std::vector<Cell> arena_;
    std::vector<LiftedTask> tasks_;
    std::vector<Frame> frames_;
    std::unordered_set<std::uint64_t> on_path_;
    std::uint32_t head_ = kNil;
    std::vector<std::string> plan_;
    std::vector<Effects> effects_;
    std::vector<Node> nodes_;
    SearchStats stats_;
};

} // namespace

LiftedResult solve_shop_lifted(const Problem &problem, const SearchLimits &limits) {
    return LiftedShop(problem, limits).run();
}

} // namespace htn
