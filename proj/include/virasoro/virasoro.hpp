#pragma once

// Exact symbolic engine for a centrally extended algebra of indexed
// generators: rational arithmetic, ordered normal forms in the enveloping
// algebra, left-ideal reduction, truncated weight modules, a verification
// suite of pinned identities, and a small expression grammar.

#include "virasoro/rational.hpp"
#include "virasoro/errors.hpp"
#include "virasoro/lie_core.hpp"
#include "virasoro/order.hpp"
#include "virasoro/pbw.hpp"
#include "virasoro/cartan.hpp"
#include "virasoro/linalg.hpp"
#include "virasoro/weight_modules.hpp"
#include "virasoro/expr.hpp"
#include "virasoro/lemma_suite.hpp"
