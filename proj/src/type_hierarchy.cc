#include "htn/type_hierarchy.h"

#include "htn/error.h"

#include <algorithm>

namespace htn {

TypeHierarchy::TypeHierarchy() {
    type_order_.push_back(kRootType);
}

void TypeHierarchy::add_type(const std::string &type, const std::string &parent) {
    if (type == kRootType) {
        if (parent != kRootType)
            throw TypingError("type 'object' cannot have a supertype");
        return;
    }
    if (!has_type(parent))
        add_type(parent, kRootType);
    for (std::string cur = parent;;) {
        if (cur == type)
            throw TypingError("cyclic type declaration involving '" + type + "'");
        auto it = parent_.find(cur);
        if (it == parent_.end())
            break;
        cur = it->second;
    }
    if (!has_type(type))
        type_order_.push_back(type);
    parent_[type] = parent;
}

void TypeHierarchy::add_object(const std::string &name, const std::string &type) {
    if (!has_type(type))
        throw TypingError("object '" + name + "' has undeclared type '" + type + "'");
    auto it = object_type_.find(name);
    if (it != object_type_.end()) {
        if (it->second != type)
            throw TypingError("object '" + name + "' declared with types '" +
                              it->second + "' and '" + type + "'");
        return;
    }
    object_order_.push_back(name);
    object_type_.emplace(name, type);
}

bool TypeHierarchy::has_type(const std::string &type) const {
    return type == kRootType || parent_.count(type) > 0;
}

bool TypeHierarchy::has_object(const std::string &name) const {
    return object_type_.count(name) > 0;
}

const std::string &TypeHierarchy::type_of(const std::string &object) const {
    auto it = object_type_.find(object);
    if (it == object_type_.end())
        throw TypingError("unknown object '" + object + "'");
    return it->second;
}

std::optional<std::string> TypeHierarchy::parent_of(const std::string &type) const {
    auto it = parent_.find(type);
    if (it == parent_.end())
        return std::nullopt;
    return it->second;
}

bool TypeHierarchy::is_subtype(const std::string &sub, const std::string &super) const {
    if (super == kRootType)
        return has_type(sub);
    std::string cur = sub;
    while (true) {
        if (cur == super)
            return true;
        auto it = parent_.find(cur);
        if (it == parent_.end())
            return false;
        cur = it->second;
    }
}

std::vector<std::string> TypeHierarchy::instances_of(const std::string &type) const {
    std::vector<std::string> result;
    for (const auto &obj : object_order_)
        if (is_subtype(object_type_.at(obj), type))
            result.push_back(obj);
    return result;
}

std::size_t TypeHierarchy::count_instances(const std::string &type) const {
    return static_cast<std::size_t>(
        std::count_if(object_order_.begin(), object_order_.end(), [&](const std::string &obj) {
            return is_subtype(object_type_.at(obj), type);
        }));
}

} // namespace htn
