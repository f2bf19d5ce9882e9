#pragma once

#include <string>

#include "gem/harness/scenario.hpp"

namespace gem {

// Policy families of the message-count experiments, all over
// memberOfAlpha(<principal>,X) with h as the requester of
// memberOfAlpha(c1,X).
//
// Family 1: a chain of partner lookups. c1 asks partner mc1 for its two
// partners c2 and c3; c2 loops back to c1; for index k the odd principal
// c(2j+1) repeats the pattern through mc(j+1) until c(2k+3). Index 0 is the
// worked example with partner "mc".
// Family 2: c1 -> c2, c3, c5..c(k+4); c2 -> c4 and back to c1; c4 -> c2;
// c3 -> c4; c5 -> c3 and c(j) -> c(j-1) for j >= 6.
// Family 3: k+1 stacked diamonds T -> L, R; L -> B; R -> B; L -> T; B -> L,
// where the bottom of one diamond is the top of the next.
//
// Canonical clause order inside each principal of families 2 and 3: clauses
// calling down the graph first, then the principal's facts, then the clause
// closing a loop back to a higher principal. Family 1 follows the worked
// example: each principal lists its rule before its fact. Facts are scaled
// by `fact_scale` except the partner facts of family 1.
Scenario generate_variant(int family, int index, int fact_scale = 1);

// "1.0", "2.3", "2.0c": suffixes a/b/c stand for scale 10/50/100.
std::string variant_label(int family, int index, int fact_scale = 1);

}  // namespace gem
