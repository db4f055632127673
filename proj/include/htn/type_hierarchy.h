#ifndef HTN_TYPE_HIERARCHY_H
#define HTN_TYPE_HIERARCHY_H

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace htn {

inline constexpr const char *kRootType = "object";

/*
  Types form a forest rooted at "object". Every constant has exactly one
  declared type; it is an instance of that type and of all its ancestors.
  Declaration order of types and constants is preserved because grounding
  enumerates constants in that order.
*/
class TypeHierarchy {
public:
    TypeHierarchy();

    // Declares `type` with the given parent. Redeclaring a type with a new
    // parent rewires it; a declaration that would close a cycle throws.
    void add_type(const std::string &type, const std::string &parent = kRootType);
    void add_object(const std::string &name, const std::string &type);

    bool has_type(const std::string &type) const;
    bool has_object(const std::string &name) const;
    const std::string &type_of(const std::string &object) const;
    std::optional<std::string> parent_of(const std::string &type) const;

    // Reflexive and transitive.
    bool is_subtype(const std::string &sub, const std::string &super) const;

    // Constants whose declared type is `type` or one of its subtypes, in
    // declaration order.
    std::vector<std::string> instances_of(const std::string &type) const;
    std::size_t count_instances(const std::string &type) const;

    const std::vector<std::string> &types() const { return type_order_; }
    const std::vector<std::string> &objects() const { return object_order_; }

private:
    std::vector<std::string> type_order_;
    std::map<std::string, std::string> parent_;
    std::vector<std::string> object_order_;
    std::map<std::string, std::string> object_type_;
};

} // namespace htn

#endif
