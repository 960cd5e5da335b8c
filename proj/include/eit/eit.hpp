#pragma once

// Umbrella header: quantum fluctuation propagation of a pump/probe beam pair
// through a three-level lambda medium under electromagnetically induced
// transparency — stationary quadrature noise spectra, numerically and in
// closed form.

#include "eit/analytic.hpp"
#include "eit/atom.hpp"
#include "eit/langevin.hpp"
#include "eit/model.hpp"
#include "eit/propagate.hpp"
#include "eit/steady_state.hpp"
#include "eit/sweep.hpp"
#include "eit/transfer.hpp"
