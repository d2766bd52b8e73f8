#pragma once

#include <stdexcept>
#include <string>

namespace reebsym {

// Exit-code categories used by the CLI.
enum class ErrorCategory {
    Verification = 1,
    Io = 2,
    Topology = 3,
    Degenerate = 4,
    BadConfig = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}
    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

#define REEBSYM_DEFINE_ERROR(Name, Category)                       \
    class Name : public Error {                                    \
    public:                                                        \
        explicit Name(const std::string& what)                     \
            : Error(ErrorCategory::Category, what) {}              \
    }

REEBSYM_DEFINE_ERROR(ParseError, Io);
REEBSYM_DEFINE_ERROR(TopologyError, Topology);
REEBSYM_DEFINE_ERROR(DegenerateError, Degenerate);
REEBSYM_DEFINE_ERROR(ResourceError, BadConfig);
REEBSYM_DEFINE_ERROR(UnknownFieldError, BadConfig);
REEBSYM_DEFINE_ERROR(DegenerateFieldError, Degenerate);
REEBSYM_DEFINE_ERROR(UnknownEdgeError, BadConfig);
REEBSYM_DEFINE_ERROR(MeanNotZeroError, Degenerate);
REEBSYM_DEFINE_ERROR(ResidualError, Verification);
REEBSYM_DEFINE_ERROR(DomainError, BadConfig);
REEBSYM_DEFINE_ERROR(BadK, BadConfig);
REEBSYM_DEFINE_ERROR(EpsTooLarge, BadConfig);
REEBSYM_DEFINE_ERROR(GapError, BadConfig);
REEBSYM_DEFINE_ERROR(NonMonotoneProfile, Degenerate);

#undef REEBSYM_DEFINE_ERROR

}  // namespace reebsym
