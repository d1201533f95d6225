#pragma once

#include "divcap/channel.hpp"
#include "divcap/format.hpp"
#include "divcap/mimo_bounds.hpp"
#include "divcap/montecarlo.hpp"
#include "divcap/numerics.hpp"
#include "divcap/outage.hpp"
#include "divcap/snr_models.hpp"
#include "divcap/sweep.hpp"
#include "divcap/validation.hpp"
