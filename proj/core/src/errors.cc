#include "embaudit/errors.h"

namespace embaudit {

const char* lookup_status_name(LookupStatus status) {
  switch (status) {
    case LookupStatus::kFound:
      return "found";
    case LookupStatus::kFiltered:
      return "filtered";
    case LookupStatus::kUnknown:
      return "unknown";
  }
  return "unknown";
}

namespace {

std::string resolution_message(const std::string& token, LookupStatus status) {
  switch (status) {
    case LookupStatus::kFiltered:
      return "token '" + token +
             "' exists in the embedding set but is filtered out by the "
             "vocabulary view";
    case LookupStatus::kUnknown:
      return "token '" + token + "' is not in the embedding set";
    case LookupStatus::kFound:
      break;
  }
  return "token '" + token + "' cannot be used";
}

}  // namespace

ResolutionError::ResolutionError(std::string token, LookupStatus status)
    : std::runtime_error(resolution_message(token, status)),
      token_(std::move(token)),
      status_(status) {}

}  // namespace embaudit
