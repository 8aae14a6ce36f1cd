#ifndef LOTOP_TABLES_HPP
#define LOTOP_TABLES_HPP

#include "lotop/pca.hpp"

#include <map>

namespace lotop {

// Finite partial functions held by the host and exposed as realizers through
// the $table builtin. The code embeds only a small handle, so nesting table
// codes inside one another keeps codes short.

// Code of x -> entries[x]; undefined (Stuck) off the domain.
Code table_code(const std::map<Nat, Nat>& entries);
// Same for a function on sequences, keyed by encode_seq.
Code table_seq_code(const std::map<Seq, Nat>& entries);

} // namespace lotop

#endif
