#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "reprank/chat_client.hpp"
#include "reprank/evaluator.hpp"
#include "reprank/run_store.hpp"

namespace reprank {

struct BatchOptions {
  std::string model;
  double temperature = 0.0;
  int max_tokens = 1024;
  std::size_t max_parallel = 4;
  RetryPolicy retry;
};

BatchOptions batch_options_from(const EndpointConfig& config);

/// Produces the judge's raw output for one request. Used both for live
/// endpoints and for the offline simulated judge.
using Judge = std::function<EvaluationRun(const EvaluationRequest&)>;

/// Judge that submits requests to `backend` with retries.
Judge make_endpoint_judge(ChatBackend& backend, BatchOptions options, Sleeper sleeper,
                          LogSink log = {});

/// Runs every request through `judge` with up to max_parallel in flight.
/// Requests already complete in `store` are not resubmitted; every new run is
/// appended to the store as soon as it finishes. Returns exactly one run per
/// request, in request order.
std::vector<EvaluationRun> evaluate_batch(const std::vector<EvaluationRequest>& requests,
                                          const Judge& judge, RunStore& store,
                                          std::size_t max_parallel);

/// evaluate_batch against a chat-completion backend.
std::vector<EvaluationRun> evaluate_batch(const std::vector<EvaluationRequest>& requests,
                                          ChatBackend& backend, const BatchOptions& options,
                                          RunStore& store, Sleeper sleeper = sleep_for,
                                          LogSink log = {});

}  // namespace reprank
