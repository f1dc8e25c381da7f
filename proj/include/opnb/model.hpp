// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <vector>

#include "opnb/dataset.hpp"
#include "opnb/objective.hpp"

namespace opnb {

struct TrainedOPNBModel {
  Matrix V;              // p x p'
  Vector column_scales;  // sd of each training column; inputs are divided
                         // by these before projecting
  std::vector<Matrix> class_z;  // per class: n_k x p' projected training rows
  ClassPriors priors;
  KernelSpec kernel;
  std::vector<std::string> class_names;
  std::vector<double> objective_trace;  // non-decreasing over accepted steps
  double final_objective = 0.0;
  bool line_search_warning = false;
  OPNBConfig config;  // as resolved at fit time

  Index p() const { return V.rows(); }
  Index p_prime() const { return V.cols(); }
  int num_classes() const { return priors.num_classes(); }
};

// Maximizes the penalized likelihood with L-BFGS from the configured
// initialization. Scaling is internal: per-column sds are estimated from
// the input (near 1 when the caller already standardized) and recorded on
// the model, so new data goes through the same transform. With
// n_restarts > 1 the extra starts are random and the best final objective
// wins. A line search that cannot make progress ends the run at the best
// iterate and sets line_search_warning.
TrainedOPNBModel fit(const Dataset& ds, const OPNBConfig& config);

// P(Y=k | X=x) rows. X_new is on the same scale as the data given to fit.
Matrix posterior(const TrainedOPNBModel& model, const Matrix& X_new);

// Same, for rows already projected into the learned space.
Matrix posterior_from_z(const TrainedOPNBModel& model, const Matrix& Z_new);

// Argmax of posterior rows; ties go to the smallest class index.
IntVector predict(const TrainedOPNBModel& model, const Matrix& X_new);

void save_model(const TrainedOPNBModel& model, const std::string& path);
TrainedOPNBModel load_model(const std::string& path);

// The "kind" field of any saved model file ("opnb", "nb", "kdda", ...),
// for dispatching a load without committing to a type.
std::string model_kind(const std::string& path);

}  // namespace opnb
