#pragma once

// Decides, for odd l, exactly which n make prod_{k=1..n} (2k^2 + l) a
// perfect square, and emits a re-verifiable certificate of the answer.

#include "sqprod/arith.hpp"
#include "sqprod/certificate.hpp"
#include "sqprod/directcheck.hpp"
#include "sqprod/errors.hpp"
#include "sqprod/sieve.hpp"
#include "sqprod/term.hpp"
#include "sqprod/threshold.hpp"
#include "sqprod/witness.hpp"
