#include "htn/domain.h"

#include <algorithm>

namespace htn {

bool TaskRef::is_ground() const {
    return std::none_of(args.begin(), args.end(), [](const Term &t) { return t.is_variable(); });
}

std::string TaskRef::to_string() const {
    std::string out = "(" + name;
    for (const auto &arg : args)
        out += " " + arg.name;
    return out + ")";
}

TaskRef substitute(const TaskRef &task, const Substitution &sigma) {
    TaskRef out = task;
    for (auto &arg : out.args) {
        if (!arg.is_variable())
            continue;
        if (const std::string *c = sigma.lookup(arg.name))
            arg = Term::constant(*c);
    }
    return out;
}

const char *to_string(Constraint::Kind kind) {
    switch (kind) {
    case Constraint::Kind::Series:
        return "series";
    case Constraint::Kind::Before:
        return "before";
    case Constraint::Kind::After:
        return "after";
    case Constraint::Kind::Between:
        return "between";
    }
    return "?";
}

int MethodSchema::tag_index(const std::string &tag) const {
    for (std::size_t i = 0; i < subtasks.size(); ++i)
        if (subtasks[i].tag == tag)
            return static_cast<int>(i);
    return -1;
}

std::vector<TypedVariable> MethodSchema::all_variables() const {
    std::vector<TypedVariable> vars = params;
    vars.insert(vars.end(), free_vars.begin(), free_vars.end());
    return vars;
}

bool TaskNetwork::primitive() const {
    return std::all_of(tasks.begin(), tasks.end(),
                       [](const TaggedTask &t) { return t.task.primitive; });
}

int TaskNetwork::tag_index(const std::string &tag) const {
    for (std::size_t i = 0; i < tasks.size(); ++i)
        if (tasks[i].tag == tag)
            return static_cast<int>(i);
    return -1;
}

const PredicateSignature *Domain::find_predicate(const std::string &pred) const {
    for (const auto &p : predicates)
        if (p.name == pred)
            return &p;
    return nullptr;
}

const OperatorSchema *Domain::find_operator(const std::string &op) const {
    for (const auto &o : operators)
        if (o.name == op)
            return &o;
    return nullptr;
}

std::vector<const MethodSchema *> Domain::methods_for(const std::string &task) const {
    std::vector<const MethodSchema *> out;
    for (const auto &m : methods)
        if (m.name == task)
            out.push_back(&m);
    return out;
}

bool Domain::is_task_name(const std::string &task) const {
    return find_operator(task) != nullptr || !methods_for(task).empty();
}

} // namespace htn
