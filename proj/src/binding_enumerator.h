#ifndef HTN_BINDING_ENUMERATOR_H
#define HTN_BINDING_ENUMERATOR_H

#include "htn/error.h"
#include "htn/expression.h"
#include "htn/type_hierarchy.h"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace htn::detail {

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
        return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

inline std::vector<Expression> top_level_conjuncts(const Expression &e) {
    if (e.kind == Expression::Kind::And)
        return e.children;
    return {e};
}

// 1 + the largest position in `vars` among the free variables of `e`; 0 when
// `e` is ground.
inline std::size_t binding_depth(const Expression &e, const std::vector<TypedVariable> &vars) {
    std::size_t depth = 0;
    for (const auto &v : free_variables(e)) {
        auto it = std::find_if(vars.begin(), vars.end(),
                               [&](const TypedVariable &tv) { return tv.name == v; });
        if (it == vars.end())
            throw TypingError("unbound variable " + v + " in " + e.to_string());
        depth = std::max(depth, static_cast<std::size_t>(it - vars.begin()) + 1);
    }
    return depth;
}

/*
  Depth-first enumeration of all type-consistent bindings of `vars`, leftmost
  variable outermost, constants in declaration order. `on_depth(d, sigma)`
  runs after the first d variables are bound and may return false to cut the
  subtree; `on_leaf(sigma)` runs for each complete binding that survived.
*/
class BindingEnumerator {
public:
    BindingEnumerator(const std::vector<TypedVariable> &vars, const TypeHierarchy &h) : vars_(vars) {
        for (const auto &v : vars_)
            domains_.push_back(h.instances_of(v.type));
        suffix_.assign(vars_.size() + 1, 1);
        for (std::size_t i = vars_.size(); i-- > 0;)
            suffix_[i] = saturating_mul(suffix_[i + 1], domains_[i].size());
    }

    // Number of complete bindings below a node at depth d.
    std::uint64_t subtree_size(std::size_t d) const { return suffix_[d]; }
    std::uint64_t total() const { return suffix_[0]; }
    const std::vector<std::string> &values(std::size_t i) const { return domains_[i]; }

    template <class OnDepth, class OnLeaf, class Tick>
    void run(OnDepth &&on_depth, OnLeaf &&on_leaf, Tick &&tick) {
        Substitution sigma;
        recurse(0, sigma, on_depth, on_leaf, tick);
    }

private:
    template <class OnDepth, class OnLeaf, class Tick>
    void recurse(std::size_t d, Substitution &sigma, OnDepth &on_depth, OnLeaf &on_leaf, Tick &tick) {
        tick();
        if (!on_depth(d, sigma))
            return;
        if (d == vars_.size()) {
            on_leaf(sigma);
            return;
        }
        for (const auto &c : domains_[d]) {
            sigma.bind_unchecked(vars_[d].name, c);
            recurse(d + 1, sigma, on_depth, on_leaf, tick);
        }
        sigma.unbind(vars_[d].name);
    }

    const std::vector<TypedVariable> &vars_;
    std::vector<std::vector<std::string>> domains_;
    std::vector<std::uint64_t> suffix_;
};

} // namespace htn::detail

#endif
