#pragma once

#include "core.hpp"
#include "csv.hpp"
#include "estimator.hpp"
#include "experiment.hpp"
#include "geodesic.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "report.hpp"
#include "ripley.hpp"
#include "sampler.hpp"
