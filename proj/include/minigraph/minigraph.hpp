#pragma once

#include "minigraph/analytic.hpp"
#include "minigraph/config.hpp"
#include "minigraph/errors.hpp"
#include "minigraph/graph_reconstruction.hpp"
#include "minigraph/io.hpp"
#include "minigraph/level_curves.hpp"
#include "minigraph/quadrature.hpp"
#include "minigraph/verifiers.hpp"
#include "minigraph/weierstrass.hpp"
