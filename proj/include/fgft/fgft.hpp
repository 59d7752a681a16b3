#pragma once

#include "fgft/error.hpp"
#include "fgft/matrix.hpp"
#include "fgft/random.hpp"
#include "fgft/graph.hpp"
#include "fgft/graph_io.hpp"
#include "fgft/givens.hpp"
#include "fgft/transform.hpp"
#include "fgft/jacobi.hpp"
#include "fgft/spectral_errors.hpp"
#include "fgft/experiment.hpp"
