#pragma once

#include <stdexcept>
#include <string>

namespace regimecast {

/// Base class for every error raised by this library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV row, config line, JSON document).
class parse_error : public error {
 public:
  using error::error;
};

/// Structurally valid input that violates a data invariant
/// (duplicate timestamps, inconsistent OHLC, misaligned series).
class validation_error : public error {
 public:
  using error::error;
};

/// Too few observations for the requested operation.
class insufficient_data_error : public error {
 public:
  using error::error;
};

/// Not enough lookback for an indicator; carries the indicator name.
class insufficient_history_error : public error {
 public:
  insufficient_history_error(const std::string& indicator, const std::string& msg)
      : error("insufficient history for " + indicator + ": " + msg),
        indicator_(indicator) {}
  const std::string& indicator() const { return indicator_; }

 private:
  std::string indicator_;
};

/// Numeric input outside an operation's domain (non-finite features,
/// non-positive closes, mismatched lengths or dimensions).
class domain_error : public error {
 public:
  using error::error;
};

/// Exchange kept answering 429 after the retry budget was spent.
class rate_limit_error : public error {
 public:
  using error::error;
};

/// Exchange data is missing minutes inside the requested window.
class gap_error : public error {
 public:
  using error::error;
};

/// A classifier could not be trained or used (empty training set, k too large).
class model_error : public error {
 public:
  using error::error;
};

/// Temporal split impossible (too few observations or empty test side).
class split_error : public error {
 public:
  using error::error;
};

/// Every candidate mixture size failed to fit.
class fit_failure_error : public error {
 public:
  using error::error;
};

/// Stage file carries the wrong schema tag or a foreign config hash.
class version_error : public error {
 public:
  using error::error;
};

/// Pipeline stage failure wrapper; carries the stage name.
class stage_error : public error {
 public:
  stage_error(const std::string& stage, const std::string& msg)
      : error("[stage " + stage + "] " + msg), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace regimecast
