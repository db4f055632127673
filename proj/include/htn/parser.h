#ifndef HTN_PARSER_H
#define HTN_PARSER_H

#include "htn/domain.h"

#include <string>
#include <string_view>

namespace htn {

/*
  Domain dialect:

    (define (domain N)
      (:requirements ...)                      ; ignored
      (:types a b - parent ...)
      (:constants c - t ...)
      (:predicates (p ?x - t ...) ...)
      (:action N :parameters (...) :precondition E :effect E)
      (:method N :parameters (...)
         :expansion ((tag t1 (task args)) ...)
         :constraints (and C ...)))

  Constraints are (series tag+), (before E G), (after E G) and
  (between E G G), where a group G is a bare tag or a list of tags.
  Method variables that are not parameters become free variables with an
  empty type, to be filled by type inference.

  Problem dialect:

    (define (problem N) (:domain N)
      (:objects o - t ...)
      (:init atom*)
      (:goal-tasks ((tag t1 (task args)) ...))
      (:goal-constraints (and C ...)))
*/
Domain parse_domain(std::string_view text, const std::string &file = "");
Problem parse_problem(std::string_view text, const Domain &domain, const std::string &file = "");

Domain load_domain(const std::string &path);
Problem load_problem(const std::string &path, const Domain &domain);
std::string read_file(const std::string &path);

std::string print_expression(const Expression &e);
std::string print_domain(const Domain &domain);
std::string print_problem(const Problem &problem);

} // namespace htn

#endif
