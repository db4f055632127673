#include "htn/planner.h"

#include "htn/validate.h"

#include <chrono>
#include <limits>
#include <unordered_set>

namespace htn {

const char *to_string(SearchStatus status) {
    switch (status) {
    case SearchStatus::Solved:
        return "solved";
    case SearchStatus::Failure:
        return "failure";
    case SearchStatus::Timeout:
        return "timeout";
    case SearchStatus::DepthExceeded:
        return "depth-exceeded";
    }
    return "?";
}

namespace {

constexpr std::uint32_t kNil = std::numeric_limits<std::uint32_t>::max();

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h * 0xff51afd7ed558ccdULL;
}

// A cell of the pending task list. Lists share their tails; an end cell
// closes the trace node of a method once all its subtasks are done.
struct Cell {
    bool end = false;
    TaskId task = 0;
    int node = 0;
    int slot = 0;
    std::uint32_t next = kNil;
    std::uint64_t hash = 0; // over the tasks only
};

struct Frame {
    std::uint32_t cell = kNil;
    State state;
    std::size_t plan_size = 0;
    std::size_t nodes_size = 0;
    std::size_t arena_size = 0;
    std::size_t next = 0;
    std::int64_t applied_group = -1;
    std::uint64_t key = 0;
    bool keyed = false;
};

class IShop {
public:
    IShop(const GroundProblem &gp, const SearchLimits &limits) : gp_(gp), limits_(limits) {
        has_residuals_ = !gp.root_constraints.empty();
        for (const auto &m : gp.methods)
            if (!m.residual_constraints.empty())
                has_residuals_ = true;
    }

    SearchResult run() {
        const auto start = std::chrono::steady_clock::now();
        deadline_ = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                std::chrono::duration<double>(limits_.timeout_seconds));
        SearchResult result;
        result.status = search();
        result.stats = stats_;
        result.stats.search_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        if (result.status == SearchStatus::Solved) {
            result.plan = plan_;
            result.trace = trace_;
        }
        return result;
    }

private:
    std::uint32_t push_cell(Cell c) {
        c.hash = c.next == kNil ? 0 : arena_[c.next].hash;
        if (!c.end)
            c.hash = mix(c.hash, c.task + 1);
        arena_.push_back(c);
        return static_cast<std::uint32_t>(arena_.size() - 1);
    }

    bool timed_out() {
        if ((++ticks_ & 4095) != 0)
            return false;
        return std::chrono::steady_clock::now() >= deadline_;
    }

    bool leaf_ok() const {
        if (!gp_.goal_state_holds(state_))
            return false;
        if (!has_residuals_)
            return true;
        return !validate_trace(gp_, plan_, trace_).has_value();
    }

    // Runs primitive tasks and end cells until the head is compound (true),
    // the list is empty and accepted (true, head_ == kNil) or the branch
    // fails (false).
    bool advance() {
        while (head_ != kNil) {
            const Cell &c = arena_[head_];
            if (c.end) {
                const TraceNode &n = trace_.nodes[c.node];
                trace_.nodes[n.parent].spans[n.parent_slot].hi = static_cast<int>(plan_.size());
                head_ = c.next;
                continue;
            }
            if (!gp_.tasks[c.task].primitive)
                return true;
            Span &span = trace_.nodes[c.node].spans[c.slot];
            span.lo = static_cast<int>(plan_.size());
            const GroundAction *chosen = nullptr;
            std::uint32_t id = 0;
            for (auto a : gp_.relevance[c.task]) {
                if (applicable(gp_.actions[a], state_)) {
                    chosen = &gp_.actions[a];
                    id = a;
                    break;
                }
            }
            if (!chosen)
                return false;
            state_ = apply(*chosen, state_);
            plan_.push_back(id);
            span.hi = span.lo + 1;
            ++stats_.nodes_expanded;
            head_ = c.next;
        }
        return leaf_ok();
    }

    // Opens a choice point for the compound task at the head.
    bool open_frame() {
        Frame f;
        f.cell = head_;
        f.state = state_;
        f.plan_size = plan_.size();
        f.nodes_size = trace_.nodes.size();
        f.arena_size = arena_.size();
        if (limits_.loop_check) {
            f.key = mix(state_.hash(), arena_[head_].hash);
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

    // Applies the next untried method of the top frame; false when none is
    // left.
    bool next_method() {
        Frame &f = frames_.back();
        const Cell task_cell = arena_[f.cell];
        const auto &relevant = gp_.relevance[task_cell.task];
        while (f.next < relevant.size()) {
            const std::uint32_t mi = relevant[f.next++];
            const GroundMethod &m = gp_.methods[mi];
            const std::int64_t group = static_cast<std::int64_t>(mi) - m.clause;
            // Clauses of one binding share their subtasks: one try is enough.
            if (group == f.applied_group)
                continue;
            if (!GroundClause{m.pre_pos, m.pre_neg}.holds(f.state))
                continue;
            f.applied_group = group;
            state_ = f.state;
            plan_.resize(f.plan_size);
            trace_.nodes.resize(f.nodes_size);
            arena_.resize(f.arena_size);

            trace_.nodes[task_cell.node].spans[task_cell.slot].lo = static_cast<int>(plan_.size());
            const int node = static_cast<int>(trace_.nodes.size());
            TraceNode tn;
            tn.method = static_cast<int>(mi);
            tn.parent = task_cell.node;
            tn.parent_slot = task_cell.slot;
            tn.spans.assign(m.subtasks.size(), Span{});
            trace_.nodes.push_back(std::move(tn));

            Cell end;
            end.end = true;
            end.node = node;
            end.next = task_cell.next;
            std::uint32_t h = push_cell(end);
            for (std::size_t i = m.subtasks.size(); i-- > 0;) {
                Cell c;
                c.task = m.subtasks[i];
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

    SearchStatus search() {
        if (limits_.timeout_seconds <= 0)
            return SearchStatus::Timeout;
        TraceNode root;
        root.spans.assign(gp_.goal_tasks.size(), Span{});
        trace_.nodes.push_back(std::move(root));
        head_ = kNil;
        for (std::size_t i = gp_.goal_tasks.size(); i-- > 0;) {
            Cell c;
            c.task = gp_.goal_tasks[i];
            c.node = 0;
            c.slot = static_cast<int>(i);
            c.next = head_;
            head_ = push_cell(c);
        }
        state_ = gp_.state0;

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

    const GroundProblem &gp_;
    const SearchLimits &limits_;
    std::chrono::steady_clock::time_point deadline_;
    bool has_residuals_ = false;
    bool cut_ = false;
    std::uint64_t ticks_ = 0;

    std::vector<Cell> arena_;
    std::vector<Frame> frames_;
    std::unordered_set<std::uint64_t> on_path_;
    std::uint32_t head_ = kNil;
    State state_;
    Plan plan_;
    DecompositionTrace trace_;
    SearchStats stats_;
};

} // namespace

SearchResult solve_ishop(const GroundProblem &gp, const SearchLimits &limits) {
    return IShop(gp, limits).run();
}

} // namespace htn
