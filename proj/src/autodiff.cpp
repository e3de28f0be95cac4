// Copyright (c) 2026 The LightLane Authors. All Rights Reserved.
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

#include "lightlane/autodiff.hpp"

#include <unordered_map>

namespace lightlane {

void backward(const Var& root) {
  LL_CHECK(root != nullptr, "backward: null root");
  LL_CHECK(root->value.numel() == 1, "backward: root must be scalar");
  if (!root->requires_grad) return;

  // Count consumers among the reachable grad-requiring subgraph.
  std::unordered_map<Node*, int> pending;
  std::vector<Node*> stack{root.get()};
  pending[root.get()] = 0;
  std::vector<Node*> discovered{root.get()};
  while (!stack.empty()) {
    Node* n = stack.back();
    stack.pop_back();
    for (const auto& p : n->parents) {
      if (!p || !p->requires_grad) continue;
      auto it = pending.find(p.get());
      if (it == pending.end()) {
        pending[p.get()] = 1;
        stack.push_back(p.get());
        discovered.push_back(p.get());
      } else {
        ++it->second;
      }
    }
  }

  root->ensure_grad().fill(real(1));
  std::vector<Node*> ready{root.get()};
  while (!ready.empty()) {
    Node* n = ready.back();
    ready.pop_back();
    if (n->backward_fn) n->backward_fn(*n);
    for (const auto& p : n->parents) {
      if (!p || !p->requires_grad) continue;
      if (--pending[p.get()] == 0) ready.push_back(p.get());
    }
    // Free the closure (and the tensors it captured) as soon as the node has
    // fired; long graphs would otherwise hold every intermediate alive.
    n->backward_fn = nullptr;
  }
}

}  // namespace lightlane
