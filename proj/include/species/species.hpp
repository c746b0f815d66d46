#pragma once

// Exact and asymptotic inference for the number of new species in an
// additional sample under NGG(σ, β) and PD(σ, θ) priors.

#include "species/alternating_sum.hpp"
#include "species/asymptotics.hpp"
#include "species/bigreal.hpp"
#include "species/errors.hpp"
#include "species/factorial.hpp"
#include "species/incomplete_gamma.hpp"
#include "species/laplace.hpp"
#include "species/models.hpp"
#include "species/params.hpp"
#include "species/posterior.hpp"
#include "species/random.hpp"
#include "species/samplers.hpp"
#include "species/stable.hpp"
#include "species/tilted_stable.hpp"
