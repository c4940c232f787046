#pragma once

// Analysis toolkit for finite length-reducing string-rewriting systems:
// classification, confluence, normalization, word reduction, finite
// subgroup structure, plain-group decomposition, and a brute-force
// Cayley-ball oracle.

#include "strew/cayley.hpp"
#include "strew/confluence.hpp"
#include "strew/decomposition.hpp"
#include "strew/errors.hpp"
#include "strew/group_analysis.hpp"
#include "strew/io.hpp"
#include "strew/normalization.hpp"
#include "strew/rewrite.hpp"
#include "strew/sampler.hpp"
#include "strew/system.hpp"
#include "strew/word.hpp"
