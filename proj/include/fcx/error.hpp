#pragma once

#include <stdexcept>
#include <string>

namespace fcx {

  //! Base class of every exception thrown by the library.
  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  //! Malformed user input: bad word syntax, out-of-range generator, bad JSON.
  class InputError : public Error {
   public:
    using Error::Error;
  };

  //! Operands live in free groups of different ranks.
  class RankMismatch : public Error {
   public:
    RankMismatch(int a, int b)
        : Error("ambient rank mismatch: " + std::to_string(a) + " vs "
                + std::to_string(b)) {}
  };

  //! A well-formed request that has no valid answer (not a basis, not a
  //! face, incomparable bounds, ...).
  class DomainError : public Error {
   public:
    using Error::Error;
  };

  //! A configured desk-scale cap was hit. `progress` describes how far the
  //! computation got before aborting.
  class ResourceLimit : public Error {
   public:
    ResourceLimit(std::string const& what, std::string progress)
        : Error(what), progress_(std::move(progress)) {}

    std::string const& progress() const noexcept {
      return progress_;
    }

   private:
    std::string progress_;
  };

}  // namespace fcx
