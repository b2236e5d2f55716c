// ctc/ctc.cc

// Copyright 2026  The fieldasr Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "ctc/ctc.h"

#include <algorithm>
#include <cmath>

#include "base/error.h"

namespace fieldasr {

double LogAdd(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

LabelSequence Collapse(std::span<const int> path, int blank) {
  LabelSequence out;
  int prev = -1;
  for (int p : path) {
    if (p != prev && p != blank) out.push_back(p);
    prev = p;
  }
  return out;
}

size_t RequiredFrames(std::span<const int> target) {
  size_t n = target.size();
  for (size_t i = 1; i < target.size(); ++i)
    if (target[i] == target[i - 1]) ++n;
  return n;
}

namespace {

void CheckTarget(const nn::Tensor &log_probs, std::span<const int> target) {
  if (log_probs.rank() != 2 || log_probs.rows() == 0)
    Fail(ErrorKind::kShape, "ctc: log_probs must be a non-empty T x V matrix, got ",
         nn::ShapeToString(log_probs.shape()));
  const int vocab = static_cast<int>(log_probs.cols());
  for (int id : target)
    if (id == CharInventory::kBlank || id < 0 || id >= vocab)
      Fail(ErrorKind::kInvalidLabel, "ctc: target label ", id,
           " is blank or outside vocabulary of ", vocab);
  size_t need = RequiredFrames(target);
  if (log_probs.rows() < need)
    Fail(ErrorKind::kInfeasible, "ctc: target needs at least ", need, " frames, input has ",
         log_probs.rows());
}

// Extended label sequence: blank, l1, blank, l2, ..., lL, blank.
std::vector<int> Extend(std::span<const int> target) {
  std::vector<int> ext(2 * target.size() + 1, CharInventory::kBlank);
  for (size_t i = 0; i < target.size(); ++i) ext[2 * i + 1] = target[i];
  return ext;
}

// Whether the skip transition s-2 -> s is allowed.
inline bool CanSkip(const std::vector<int> &ext, size_t s) {
  return s >= 2 && ext[s] != CharInventory::kBlank && ext[s] != ext[s - 2];
}

}  // namespace

CtcResult CtcLoss(const nn::Tensor &log_probs, std::span<const int> target) {
  CheckTarget(log_probs, target);
  const size_t frames = log_probs.rows(), vocab = log_probs.cols();
  const std::vector<int> ext = Extend(target);
  const size_t S = ext.size();
  auto y = [&](size_t t, size_t s) { return log_probs[t * vocab + ext[s]]; };

  std::vector<double> alpha(frames * S, kLogZero), beta(frames * S, kLogZero);
  alpha[0] = y(0, 0);
  if (S > 1) alpha[1] = y(0, 1);
  for (size_t t = 1; t < frames; ++t) {
    for (size_t s = 0; s < S; ++s) {
      double a = alpha[(t - 1) * S + s];
      if (s >= 1) a = LogAdd(a, alpha[(t - 1) * S + s - 1]);
      if (CanSkip(ext, s)) a = LogAdd(a, alpha[(t - 1) * S + s - 2]);
      if (a != kLogZero) alpha[t * S + s] = a + y(t, s);
    }
  }
  const size_t last = frames - 1;
  beta[last * S + S - 1] = y(last, S - 1);
  if (S > 1) beta[last * S + S - 2] = y(last, S - 2);
  for (size_t t = last; t-- > 0;) {
    for (size_t s = 0; s < S; ++s) {
      double b = beta[(t + 1) * S + s];
      if (s + 1 < S) b = LogAdd(b, beta[(t + 1) * S + s + 1]);
      if (s + 2 < S && CanSkip(ext, s + 2)) b = LogAdd(b, beta[(t + 1) * S + s + 2]);
      if (b != kLogZero) beta[t * S + s] = b + y(t, s);
    }
  }
  double log_p = alpha[last * S + S - 1];
  if (S > 1) log_p = LogAdd(log_p, alpha[last * S + S - 2]);
  if (log_p == kLogZero || !std::isfinite(log_p))
    Fail(ErrorKind::kNumeric, "ctc: target has zero probability under log_probs");

  // Occupancy gamma_t(k) = sum over s with ext[s] = k of
  // alpha_t(s) beta_t(s) / (y_t(k) p); d(-log p)/d log y_t(k) = -gamma_t(k).
  nn::Tensor grad(log_probs.shape());
  std::vector<double> acc(vocab);
  for (size_t t = 0; t < frames; ++t) {
    std::fill(acc.begin(), acc.end(), kLogZero);
    for (size_t s = 0; s < S; ++s) {
      double ab = alpha[t * S + s] + beta[t * S + s];
      if (alpha[t * S + s] == kLogZero || beta[t * S + s] == kLogZero) continue;
      acc[ext[s]] = LogAdd(acc[ext[s]], ab - y(t, s));
    }
    for (size_t k = 0; k < vocab; ++k)
      if (acc[k] != kLogZero) grad[t * vocab + k] = -std::exp(acc[k] - log_p);
  }
  return {-log_p, std::move(grad)};
}

LabelSequence GreedyDecode(const nn::Tensor &log_probs) {
  const size_t frames = log_probs.rows(), vocab = log_probs.cols();
  std::vector<int> path(frames);
  for (size_t t = 0; t < frames; ++t) {
    const double *row = log_probs.data() + t * vocab;
    path[t] = static_cast<int>(std::max_element(row, row + vocab) - row);
  }
  return Collapse(path);
}

std::vector<size_t> CtcAlign(const nn::Tensor &log_probs, std::span<const int> target) {
  CheckTarget(log_probs, target);
  if (target.empty()) return {};
  const size_t frames = log_probs.rows(), vocab = log_probs.cols();
  const std::vector<int> ext = Extend(target);
  const size_t S = ext.size();
  auto y = [&](size_t t, size_t s) { return log_probs[t * vocab + ext[s]]; };
  std::vector<double> score(frames * S, kLogZero);
  std::vector<int> back(frames * S, -1);
  score[0] = y(0, 0);
  score[1] = y(0, 1);
  for (size_t t = 1; t < frames; ++t) {
    for (size_t s = 0; s < S; ++s) {
      double best = score[(t - 1) * S + s];
      int arg = static_cast<int>(s);
      if (s >= 1 && score[(t - 1) * S + s - 1] > best) {
        best = score[(t - 1) * S + s - 1];
        arg = static_cast<int>(s - 1);
      }
      if (CanSkip(ext, s) && score[(t - 1) * S + s - 2] > best) {
        best = score[(t - 1) * S + s - 2];
        arg = static_cast<int>(s - 2);
      }
      if (best != kLogZero) {
        score[t * S + s] = best + y(t, s);
        back[t * S + s] = arg;
      }
    }
  }
  const size_t last = frames - 1;
  size_t s = score[last * S + S - 1] >= score[last * S + S - 2] ? S - 1 : S - 2;
  std::vector<size_t> state_at(frames);
  for (size_t t = last;; --t) {
    state_at[t] = s;
    if (t == 0) break;
    s = static_cast<size_t>(back[t * S + s]);
  }
  std::vector<size_t> starts(target.size());
  for (size_t t = 0; t < frames; ++t) {
    size_t st = state_at[t];
    bool entered = t == 0 || state_at[t - 1] != st;
    if (st % 2 == 1 && entered) starts[st / 2] = t;
  }
  return starts;
}

CtcPrefixScorer::CtcPrefixScorer(const nn::Tensor &log_probs, int blank, int eos)
    : log_probs_(log_probs),
      frames_(log_probs.rows()),
      vocab_(log_probs.cols()),
      blank_(blank),
      eos_(eos) {
  if (log_probs.rank() != 2 || frames_ == 0)
    Fail(ErrorKind::kShape, "ctc prefix scorer: bad log_probs shape ",
         nn::ShapeToString(log_probs.shape()));
}

CtcPrefixScorer::State CtcPrefixScorer::Initial() const {
  State st;
  st.r_nonblank.assign(frames_, kLogZero);
  st.r_blank.resize(frames_);
  double acc = 0.0;
  for (size_t t = 0; t < frames_; ++t) {
    acc += log_probs_[t * vocab_ + blank_];
    st.r_blank[t] = acc;
  }
  st.score = 0.0;
  return st;
}

CtcPrefixScorer::State CtcPrefixScorer::Extend(const State &g, int c) const {
  if (g.ended) Fail(ErrorKind::kState, "ctc prefix scorer: prefix already ended");
  if (c == blank_) Fail(ErrorKind::kInvalidLabel, "ctc prefix scorer: next label is blank");
  if (c < 0 || static_cast<size_t>(c) >= vocab_)
    Fail(ErrorKind::kInvalidLabel, "ctc prefix scorer: label ", c, " outside vocabulary");
  State h;
  if (c == eos_) {
    h.score = LogAdd(g.r_nonblank[frames_ - 1], g.r_blank[frames_ - 1]);
    h.last = g.last;
    h.ended = true;
    return h;
  }
  auto y = [&](size_t t, int k) { return log_probs_[t * vocab_ + k]; };
  h.r_nonblank.assign(frames_, kLogZero);
  h.r_blank.assign(frames_, kLogZero);
  h.last = c;
  if (g.last == -1) h.r_nonblank[0] = y(0, c);
  double psi = h.r_nonblank[0];
  for (size_t t = 1; t < frames_; ++t) {
    double phi = g.r_blank[t - 1];
    if (g.last != c) phi = LogAdd(phi, g.r_nonblank[t - 1]);
    h.r_nonblank[t] = LogAdd(h.r_nonblank[t - 1], phi) + y(t, c);
    h.r_blank[t] = LogAdd(h.r_blank[t - 1], h.r_nonblank[t - 1]) + y(t, blank_);
    if (phi != kLogZero) psi = LogAdd(psi, phi + y(t, c));
  }
  h.score = psi;
  return h;
}

double CtcPrefixScore(const nn::Tensor &log_probs, std::span<const int> prefix, int next) {
  CtcPrefixScorer scorer(log_probs);
  CtcPrefixScorer::State st = scorer.Initial();
  for (int id : prefix) st = scorer.Extend(st, id);
  return scorer.Extend(st, next).score;
}

}  // namespace fieldasr
