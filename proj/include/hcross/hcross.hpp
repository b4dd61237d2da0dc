#pragma once

#include "hcross/spectral.hpp"
#include "hcross/fft.hpp"
#include "hcross/kernels.hpp"
#include "hcross/norms.hpp"
#include "hcross/classes.hpp"
#include "hcross/lp.hpp"
#include "hcross/witness.hpp"
#include "hcross/experiments.hpp"
