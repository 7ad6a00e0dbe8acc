#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dsg {

// Every library failure carries a stable kind string so callers (and the CLI
// exit-code mapping) can dispatch without string-matching what() texts.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define DSG_DEFINE_ERROR(Name)                                          \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what) : Error(#Name, what) {}      \
  };

DSG_DEFINE_ERROR(LookupError)            // unknown state/action/signal label
DSG_DEFINE_ERROR(ParseError)             // malformed input file
DSG_DEFINE_ERROR(ZeroProbabilitySignal)  // belief update on an impossible signal
DSG_DEFINE_ERROR(InadmissibleHistory)    // history has zero probability from the root belief
DSG_DEFINE_ERROR(InadmissibleSignal)     // abstract update on an impossible signal
DSG_DEFINE_ERROR(CapExceeded)            // enumeration or state-count cap hit
DSG_DEFINE_ERROR(NotStochastic)
DSG_DEFINE_ERROR(NotBlind)
DSG_DEFINE_ERROR(NotErgodic)
DSG_DEFINE_ERROR(NotPrimitive)
DSG_DEFINE_ERROR(EtaTooSmall)            // grid too coarse for a support-preserving projection
DSG_DEFINE_ERROR(NumericalFailure)
DSG_DEFINE_ERROR(NoCertificate)
DSG_DEFINE_ERROR(InvalidBlockStructure)

#undef DSG_DEFINE_ERROR

}  // namespace dsg
