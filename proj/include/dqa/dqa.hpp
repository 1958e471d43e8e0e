#ifndef DQA_DQA_HPP
#define DQA_DQA_HPP

#include "core.hpp"
#include "dataset.hpp"
#include "csv.hpp"
#include "schema.hpp"
#include "stats.hpp"
#include "scott_knott.hpp"
#include "kmeans.hpp"
#include "detectors.hpp"
#include "cleaners.hpp"
#include "injector.hpp"
#include "learners.hpp"
#include "interpret.hpp"
#include "json_io.hpp"
#include "experiment.hpp"
#include "report.hpp"
#include "synthetic.hpp"

#endif
