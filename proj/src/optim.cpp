// Copyright 2026 The stgfn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stgfn/optim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stgfn/error.hpp"

namespace stgfn {

void adamw_step(std::span<Tensor* const> params, AdamWState& state) {
  if (state.first_moment.empty()) {
    for (const Tensor* p : params) {
      state.first_moment.emplace_back(p->size(), 0.0);
      state.second_moment.emplace_back(p->size(), 0.0);
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw ContractError("adamw_step: optimizer state tracks " + std::to_string(state.first_moment.size()) +
                        " tensors but " + std::to_string(params.size()) + " were passed");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->grad()) throw ContractError("adamw_step: parameter " + std::to_string(i) + " has no gradient");
    if (state.first_moment[i].size() != params[i]->size()) {
      throw ContractError("adamw_step: moment buffer " + std::to_string(i) + " does not match parameter shape");
    }
  }

  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(state.beta1, t);
  const double bias2 = 1.0 - std::pow(state.beta2, t);
  const double decay = 1.0 - state.lr * state.weight_decay;

  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& p = *params[i];
    const std::vector<double>& g = *p.grad();
    std::vector<double>& m = state.first_moment[i];
    std::vector<double>& v = state.second_moment[i];
    double* theta = p.data();
    for (std::size_t j = 0; j < p.size(); ++j) {
      theta[j] *= decay;
      m[j] = state.beta1 * m[j] + (1.0 - state.beta1) * g[j];
      v[j] = state.beta2 * v[j] + (1.0 - state.beta2) * g[j] * g[j];
      const double m_hat = m[j] / bias1;
      const double v_hat = v[j] / bias2;
      theta[j] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
  }
}

bool scheduler_step(PlateauScheduler& sched, double monitored, double& lr) {
  if (monitored < sched.best - sched.min_delta) {
    sched.best = monitored;
    sched.bad_epochs = 0;
    return false;
  }
  sched.bad_epochs += 1;
  if (sched.bad_epochs >= sched.patience) {
    sched.bad_epochs = 0;
    const double next = std::max(lr * sched.factor, sched.min_lr);
    const bool changed = next < lr;
    lr = next;
    return changed;
  }
  return false;
}

}  // namespace stgfn
