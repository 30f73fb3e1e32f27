#pragma once

#include "anticorr/analytic.hpp"
#include "anticorr/errors.hpp"
#include "anticorr/excitation.hpp"
#include "anticorr/gf_engine.hpp"
#include "anticorr/hermite.hpp"
#include "anticorr/montecarlo.hpp"
#include "anticorr/trinomial.hpp"
#include "anticorr/weight_table.hpp"
