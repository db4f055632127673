#ifndef HTN_DOMAIN_H
#define HTN_DOMAIN_H

#include "htn/expression.h"
#include "htn/type_hierarchy.h"

#include <string>
#include <vector>

namespace htn {

struct TaskRef {
    std::string name;
    std::vector<Term> args;
    // Resolved against operator names at load time.
    bool primitive = false;

    bool is_ground() const;
    std::string to_string() const;

    bool operator==(const TaskRef &) const = default;
};

TaskRef substitute(const TaskRef &task, const Substitution &sigma);

struct TaggedTask {
    std::string tag;
    TaskRef task;

    bool operator==(const TaggedTask &) const = default;
};

struct Constraint {
    enum class Kind { Series, Before, After, Between };

    Kind kind = Kind::Series;
    Expression formula;             // unused for Series
    std::vector<std::string> tags;  // Series order, or the (first) group
    std::vector<std::string> tags2; // second group of Between

    bool has_formula() const { return kind != Kind::Series; }
    bool operator==(const Constraint &) const = default;
};

const char *to_string(Constraint::Kind kind);

struct PredicateSignature {
    std::string name;
    std::vector<TypedVariable> params;
};

struct OperatorSchema {
    std::string name;
    std::vector<TypedVariable> params;
    Expression precondition;
    Expression effect;
};

struct MethodSchema {
    std::string name;
    std::vector<TypedVariable> params;
    std::vector<TaggedTask> subtasks;
    std::vector<Constraint> constraints;
    // Variables used in the body but not declared as parameters. Their type
    // is empty until type inference runs.
    std::vector<TypedVariable> free_vars;

    // Index of `tag` among the subtasks, or -1.
    int tag_index(const std::string &tag) const;
    // Parameters followed by free variables: the enumeration order.
    std::vector<TypedVariable> all_variables() const;
};

struct TaskNetwork {
    std::vector<TaggedTask> tasks;
    std::vector<Constraint> constraints;

    bool empty() const { return tasks.empty(); }
    bool primitive() const;
    int tag_index(const std::string &tag) const;
};

struct Domain {
    std::string name;
    TypeHierarchy hierarchy;
    std::vector<PredicateSignature> predicates;
    std::vector<OperatorSchema> operators;
    std::vector<MethodSchema> methods;

    const PredicateSignature *find_predicate(const std::string &name) const;
    const OperatorSchema *find_operator(const std::string &name) const;
    std::vector<const MethodSchema *> methods_for(const std::string &task) const;
    bool is_task_name(const std::string &name) const;
};

struct Problem {
    std::string name;
    Domain domain; // hierarchy includes the problem's objects
    std::vector<std::string> objects; // declared in the problem, in order
    std::vector<Atom> init;
    TaskNetwork goal;
};

} // namespace htn

#endif
