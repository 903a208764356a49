#ifndef DQCERT_DQDIMACS_HPP
#define DQCERT_DQDIMACS_HPP

#include "dqcert/dqbf.hpp"

#include <string>
#include <vector>

namespace dqcert {

/// Result of parsing a DQDIMACS document. Warnings cover recoverable
/// oddities: free matrix variables (adopted as existentials with full
/// dependency set), header counts that disagree with the body.
struct ParsedDqbf {
  Dqbf formula;
  std::vector<std::string> warnings;
};

/// Parses DQDIMACS text:
///   c ...                     comment line
///   p cnf <#vars> <#clauses>  header (required, first non-comment line)
///   a v1 ... 0                universal variables
///   e v1 ... 0                existentials depending on all universals so far
///   d v u1 ... 0              existential v with explicit dependency set
///   l1 l2 ... 0               clause (may span lines)
/// Prefix lines must precede all clauses. Throws ParseError with 1-based
/// line/column on malformed input, double quantification, or a `d`-line
/// dependency that is not a declared universal.
ParsedDqbf parse_dqdimacs(const std::string &text);

/// Canonical DQDIMACS form: header with max_var, one `a` line (declaration
/// order, omitted when there are no universals), one `d` line per
/// existential in declaration order with ascending dependencies, then the
/// matrix clauses. Reparsing yields a structurally identical formula.
std::string write_dqdimacs(const Dqbf &f);

} // namespace dqcert

#endif
