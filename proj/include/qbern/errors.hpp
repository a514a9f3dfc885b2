#pragma once

#include <stdexcept>
#include <string>

namespace qbern {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define QBERN_DEFINE_ERROR(Name)                                           \
    class Name : public Error {                                           \
    public:                                                                \
        explicit Name(const std::string& what) : Error(what) {}            \
    }

QBERN_DEFINE_ERROR(InvalidArgument);
QBERN_DEFINE_ERROR(NonIntegerArgument);
QBERN_DEFINE_ERROR(DomainUnsupported);
QBERN_DEFINE_ERROR(DimensionMismatch);
QBERN_DEFINE_ERROR(OrderMismatch);
QBERN_DEFINE_ERROR(OrderExceeded);
QBERN_DEFINE_ERROR(ZeroConstantTerm);
QBERN_DEFINE_ERROR(InvalidDegree);
QBERN_DEFINE_ERROR(InvalidIndex);
QBERN_DEFINE_ERROR(DivisionByZero);
QBERN_DEFINE_ERROR(PoleAtOne);
QBERN_DEFINE_ERROR(NonPositiveInteger);
QBERN_DEFINE_ERROR(IdentityViolation);

#undef QBERN_DEFINE_ERROR

} // namespace qbern
