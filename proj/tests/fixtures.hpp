#pragma once

#include <string>

#include "cofix/model.hpp"

// The four shared models the examples and acceptance criteria run on:
//   M1  kripke chain s0 -> s1 -> s2 with a self loop at s2, p@{s2}, q@{s1}
//   M2  labeled, a: t0 -> t1, b: t1 -> t2, p@{t2}
//   MQ  prob, x steps to y with mass 1, y halts; payout p: x 0, y 1
//   MQ2 prob, u loops (0.5) or moves to w (0.25), w halts; payout p: u 0, w 0.8
namespace fixtures {

inline const char* kM1 = R"({
  "kind": "kripke",
  "states": ["s0", "s1", "s2"],
  "props": {"p": ["s2"], "q": ["s1"]},
  "succ": {"s0": ["s1"], "s1": ["s2"], "s2": ["s2"]}
})";

inline const char* kM2 = R"({
  "kind": "labeled",
  "states": ["t0", "t1", "t2"],
  "props": {"p": ["t2"]},
  "labels": ["a", "b"],
  "succ": {"a": {"t0": ["t1"]}, "b": {"t1": ["t2"]}}
})";

inline const char* kMQ = R"({
  "kind": "prob",
  "states": ["x", "y"],
  "payoutLabels": ["p"],
  "payout": {"p": {"x": 0.0, "y": 1.0}},
  "step": {"x": {"y": 1.0}, "y": {}}
})";

inline const char* kMQ2 = R"({
  "kind": "prob",
  "states": ["u", "w"],
  "payoutLabels": ["p"],
  "payout": {"p": {"u": 0.0, "w": 0.8}},
  "step": {"u": {"u": 0.5, "w": 0.25}, "w": {}}
})";

inline cofix::Model m1() { return cofix::loadModel(kM1); }
inline cofix::Model m2() { return cofix::loadModel(kM2); }
inline cofix::Model mq() { return cofix::loadModel(kMQ); }
inline cofix::Model mq2() { return cofix::loadModel(kMQ2); }

} // namespace fixtures
