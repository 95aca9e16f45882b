#pragma once

#include <stdexcept>
#include <string>

namespace casq
{

// Exit-code class each error maps to at the command line.
enum class ErrorClass
{
    validation = 2,
    numerical = 3,
    io = 4,
};

class Error : public std::runtime_error
{
  public:
    Error(std::string name, const std::string& what, ErrorClass cls)
        : std::runtime_error(name + ": " + what), name_(std::move(name)), message_(what), class_(cls)
    {
    }

    const std::string& name() const noexcept { return name_; }
    const std::string& message() const noexcept { return message_; }
    ErrorClass error_class() const noexcept { return class_; }
    int exit_code() const noexcept { return static_cast<int>(class_); }

  private:
    std::string name_;
    std::string message_;
    ErrorClass class_;
};

#define CASQ_DEFINE_ERROR(Name, Class)                                         \
    class Name : public Error                                                  \
    {                                                                          \
      public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, what, Class) {}  \
    };

CASQ_DEFINE_ERROR(InvalidArgument, ErrorClass::validation)
CASQ_DEFINE_ERROR(PoleProximity, ErrorClass::validation)
CASQ_DEFINE_ERROR(ParseError, ErrorClass::validation)
CASQ_DEFINE_ERROR(DuplicateSpecies, ErrorClass::validation)
CASQ_DEFINE_ERROR(UnknownSpecies, ErrorClass::validation)
CASQ_DEFINE_ERROR(UnitMismatch, ErrorClass::validation)
CASQ_DEFINE_ERROR(BadParameterPath, ErrorClass::validation)
CASQ_DEFINE_ERROR(OutOfWindow, ErrorClass::validation)
CASQ_DEFINE_ERROR(ImproperWindow, ErrorClass::validation)
CASQ_DEFINE_ERROR(NonPositiveDistance, ErrorClass::validation)
CASQ_DEFINE_ERROR(CollisionGuard, ErrorClass::validation)
CASQ_DEFINE_ERROR(NotTwoLevel, ErrorClass::validation)
CASQ_DEFINE_ERROR(NegativeRadicand, ErrorClass::validation)
CASQ_DEFINE_ERROR(ZeroImpactParameter, ErrorClass::validation)
CASQ_DEFINE_ERROR(RWAViolation, ErrorClass::validation)
CASQ_DEFINE_ERROR(NonFiniteEvaluation, ErrorClass::numerical)
CASQ_DEFINE_ERROR(NonConvergent, ErrorClass::numerical)
CASQ_DEFINE_ERROR(IoError, ErrorClass::io)

#undef CASQ_DEFINE_ERROR

} // namespace casq
