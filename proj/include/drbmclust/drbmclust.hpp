#pragma once
// Umbrella header for the whole library.

#include "baselines.hpp"
#include "bic.hpp"
#include "dataset.hpp"
#include "drbm.hpp"
#include "gmm.hpp"
#include "kmeans.hpp"
#include "kohonen.hpp"
#include "matrix.hpp"
#include "metrics.hpp"
#include "pipeline.hpp"
#include "rbm.hpp"
#include "rng.hpp"
#include "serialize.hpp"
