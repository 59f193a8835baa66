#pragma once

#include "sprkit/ball_growing.hpp"
#include "sprkit/decomp.hpp"
#include "sprkit/error.hpp"
#include "sprkit/evaluate.hpp"
#include "sprkit/general.hpp"
#include "sprkit/generate.hpp"
#include "sprkit/graph.hpp"
#include "sprkit/io.hpp"
#include "sprkit/minor.hpp"
#include "sprkit/parallel.hpp"
#include "sprkit/random.hpp"
#include "sprkit/report.hpp"
