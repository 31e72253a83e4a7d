#include "reprank/batch.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace reprank {

BatchOptions batch_options_from(const EndpointConfig& config) {
  return {config.model, config.temperature, config.max_tokens, config.max_parallel,
          RetryPolicy{config.max_attempts, config.initial_backoff, 2.0}};
}

Judge make_endpoint_judge(ChatBackend& backend, BatchOptions options, Sleeper sleeper,
                          LogSink log) {
  return [&backend, options = std::move(options), sleeper = std::move(sleeper),
          log = std::move(log)](const EvaluationRequest& request) {
    ChatRequest chat{options.model, request.system_message, request.user_message,
                     options.temperature, options.max_tokens};
    LogSink tagged;
    if (log) {
      tagged = [&](const std::string& line) {
        log(request.prompt_id + "#" + std::to_string(request.repetition_index) + ": " + line);
      };
    }
    auto [result, attempts] = complete_with_retry(backend, chat, options.retry, sleeper, tagged);
    EvaluationRun run;
    run.request = request;
    run.attempts = attempts;
    if (!result.ok()) {
      run.outcome = {OutcomeKind::kTransportFailure, std::nullopt, result.error};
      return run;
    }
    run.raw_output = result.text;
    run.outcome = classify_output(run.raw_output, request.presentation_order);
    return run;
  };
}

std::vector<EvaluationRun> evaluate_batch(const std::vector<EvaluationRequest>& requests,
                                          const Judge& judge, RunStore& store,
                                          std::size_t max_parallel) {
  std::vector<EvaluationRun> results(requests.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    RunStore::Key key{requests[i].prompt_id, requests[i].repetition_index};
    if (store.is_complete(key)) {
      results[i] = *store.find(key);
    } else {
      pending.push_back(i);
    }
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t slot = next++; slot < pending.size(); slot = next++) {
      const std::size_t i = pending[slot];
      try {
        auto run = judge(requests[i]);
        store.append(run);
        results[i] = std::move(run);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next = pending.size();
      }
    }
  };

  const std::size_t threads = std::min(std::max<std::size_t>(max_parallel, 1), pending.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return results;
}

std::vector<EvaluationRun> evaluate_batch(const std::vector<EvaluationRequest>& requests,
                                          ChatBackend& backend, const BatchOptions& options,
                                          RunStore& store, Sleeper sleeper, LogSink log) {
  const auto judge = make_endpoint_judge(backend, options, std::move(sleeper), std::move(log));
  return evaluate_batch(requests, judge, store, options.max_parallel);
}

}  // namespace reprank
