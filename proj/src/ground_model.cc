#include "htn/ground_model.h"

#include "htn/error.h"

#include <algorithm>
#include <bit>

namespace htn {

PropId PropositionTable::intern(const Atom &atom) {
    std::string key = atom.to_string();
    auto it = index_.find(key);
    if (it != index_.end())
        return it->second;
    if (frozen_)
        throw Error("proposition table is frozen; cannot intern " + key);
    if (!atom.is_ground())
        throw Error("cannot intern non-ground atom " + key);
    PropId id = static_cast<PropId>(atoms_.size());
    atoms_.push_back(atom);
    index_.emplace(std::move(key), id);
    return id;
}

std::optional<PropId> PropositionTable::find(const Atom &atom) const {
    return find(atom.to_string());
}

std::optional<PropId> PropositionTable::find(const std::string &key) const {
    auto it = index_.find(key);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

State::State(std::size_t num_props)
    : words_((num_props + 63) / 64, 0), num_bits_(num_props) {
}

void State::insert(PropId id) {
    if (id >= num_bits_) {
        num_bits_ = id + 1;
        words_.resize((num_bits_ + 63) / 64, 0);
    }
    words_[id >> 6] |= std::uint64_t{1} << (id & 63);
}

void State::erase(PropId id) {
    if (id < num_bits_)
        words_[id >> 6] &= ~(std::uint64_t{1} << (id & 63));
}

std::size_t State::count() const {
    std::size_t n = 0;
    for (auto w : words_)
        n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::vector<PropId> State::ids() const {
    std::vector<PropId> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t word = words_[w];
        while (word) {
            int bit = std::countr_zero(word);
            out.push_back(static_cast<PropId>(w * 64 + bit));
            word &= word - 1;
        }
    }
    return out;
}

std::uint64_t State::hash() const {
    // FNV-1a over the words, ignoring trailing zero words so that states of
    // different capacity with equal contents hash alike.
    std::size_t end = words_.size();
    while (end > 0 && words_[end - 1] == 0)
        --end;
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < end; ++i) {
        h ^= words_[i];
        h *= 1099511628211ull;
    }
    return h;
}

bool State::operator==(const State &other) const {
    const auto &a = words_.size() >= other.words_.size() ? words_ : other.words_;
    const auto &b = words_.size() >= other.words_.size() ? other.words_ : words_;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint64_t wb = i < b.size() ? b[i] : 0;
        if (a[i] != wb)
            return false;
    }
    return true;
}

std::string GroundAction::signature() const {
    std::string out = "(" + name;
    for (const auto &a : args)
        out += " " + a;
    return out + ")";
}

bool applicable(const GroundAction &a, const State &s) {
    for (PropId p : a.pre_pos)
        if (!s.contains(p))
            return false;
    for (PropId p : a.pre_neg)
        if (s.contains(p))
            return false;
    return true;
}

State apply(const GroundAction &a, const State &s) {
    State next = s;
    for (PropId p : a.eff_neg)
        next.erase(p);
    for (PropId p : a.eff_pos)
        next.insert(p);
    return next;
}

std::string GroundTask::to_string() const {
    std::string out = "(" + name;
    for (const auto &a : args)
        out += " " + a;
    return out + ")";
}

bool GroundClause::holds(const State &s) const {
    return std::all_of(pos.begin(), pos.end(), [&](PropId p) { return s.contains(p); }) &&
           std::none_of(neg.begin(), neg.end(), [&](PropId p) { return s.contains(p); });
}

bool GroundFormula::holds(const State &s) const {
    return std::any_of(clauses.begin(), clauses.end(),
                       [&](const GroundClause &c) { return c.holds(s); });
}

std::string GroundMethod::signature() const {
    std::string out = "(" + name;
    for (const auto &a : args)
        out += " " + a;
    return out + ")";
}

std::optional<TaskId> GroundProblem::find_task(const GroundTask &task) const {
    auto it = task_index.find(task.to_string());
    if (it == task_index.end())
        return std::nullopt;
    return it->second;
}

std::vector<std::uint32_t> GroundProblem::find_actions(const std::string &signature) const {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < actions.size(); ++i)
        if (actions[i].signature() == signature)
            out.push_back(static_cast<std::uint32_t>(i));
    return out;
}

bool GroundProblem::goal_state_holds(const State &s) const {
    return GroundClause{goal_state_pos, goal_state_neg}.holds(s);
}

std::vector<std::vector<int>> DecompositionTrace::children() const {
    std::vector<std::vector<int>> out(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].parent >= 0)
            out[nodes[i].parent].push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < out.size(); ++i)
        std::sort(out[i].begin(), out[i].end(), [&](int a, int b) {
            return nodes[a].parent_slot < nodes[b].parent_slot;
        });
    return out;
}

} // namespace htn
