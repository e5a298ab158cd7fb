#pragma once

#include "gbandit/contextual.hpp"
#include "gbandit/environment.hpp"
#include "gbandit/error_curve.hpp"
#include "gbandit/errors.hpp"
#include "gbandit/generators.hpp"
#include "gbandit/graph.hpp"
#include "gbandit/nne.hpp"
#include "gbandit/pac.hpp"
#include "gbandit/rng.hpp"
#include "gbandit/shortest_paths.hpp"
#include "gbandit/spanning_tree.hpp"
#include "gbandit/version.hpp"
