#pragma once

#include "smax/bands.hpp"
#include "smax/config.hpp"
#include "smax/counterexample.hpp"
#include "smax/experiments.hpp"
#include "smax/fft.hpp"
#include "smax/grid.hpp"
#include "smax/maximal.hpp"
#include "smax/parallel.hpp"
#include "smax/propagator.hpp"
#include "smax/quadrature.hpp"
#include "smax/report.hpp"
#include "smax/rng.hpp"
#include "smax/sequences.hpp"
