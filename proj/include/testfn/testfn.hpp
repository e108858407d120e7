// Convenience header pulling in the whole library.
#pragma once

#include "testfn/calculus.hpp"
#include "testfn/constrained.hpp"
#include "testfn/core.hpp"
#include "testfn/functions.hpp"
#include "testfn/harness.hpp"
#include "testfn/io.hpp"
#include "testfn/optimizers.hpp"
#include "testfn/registry.hpp"
#include "testfn/stochastic.hpp"
