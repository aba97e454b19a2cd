#pragma once

// Umbrella header: the full encoder/decoder chain, the unrolled weighted
// decoder with its training loop, and the Monte Carlo harness.

#include "turbolab/adam.hpp"
#include "turbolab/ber.hpp"
#include "turbolab/channel.hpp"
#include "turbolab/io.hpp"
#include "turbolab/llr_frame.hpp"
#include "turbolab/map_oracle.hpp"
#include "turbolab/rng.hpp"
#include "turbolab/siso.hpp"
#include "turbolab/training.hpp"
#include "turbolab/trellis.hpp"
#include "turbolab/turbo_code.hpp"
#include "turbolab/turbo_decoder.hpp"
#include "turbolab/turbonet.hpp"
