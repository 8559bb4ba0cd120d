#ifndef RELCOMP_PARSER_HPP
#define RELCOMP_PARSER_HPP

#include <string_view>

#include "relcomp/formula.hpp"
#include "relcomp/relalg.hpp"
#include "relcomp/semantics.hpp"

namespace relcomp {

// Formula text:
//   formula := iff ; iff := imp ("<=>" imp)* ; imp := or ("=>" or)* ;
//   or := and ("|" and)* ; and := unary ("&" unary)* ;
//   unary := "!" unary | ("exists" | "forall") varlist "." formula | primary ;
//   primary := "1" | ident "(" [varlist] ")" | ident "=" ident | "(" formula ")"
// A quantifier body extends as far right as possible. Sugar is removed:
// a => b is !a | b, a <=> b is (a => b) & (b => a), forall x. a is
// !exists x. !a. New variable names are interned into the universe.
Formula parse_formula(std::string_view text, const DatabaseScheme& scheme,
                      VarUniverse& universe);

// Lines `relation r(x1, x2)`; `#` starts a comment.
void parse_scheme(std::string_view text, DatabaseScheme& scheme, VarUniverse& universe);

// Scheme lines plus `domain: a b c` (exactly once) and tuple lines `r: a b`.
// Every scheme relation ends up interpreted, empty when no tuple names it.
Structure parse_database(std::string_view text, DatabaseScheme& scheme,
                         VarUniverse& universe);

// DEE | r | (E union E) | (E minus E) | (E join E) | project{x,y}(E)
// | select{x=y}(E) | rename{y<-x}(E)
RelExpr parse_expr(std::string_view text, const DatabaseScheme& scheme,
                   VarUniverse& universe);

}  // namespace relcomp

#endif  // RELCOMP_PARSER_HPP
