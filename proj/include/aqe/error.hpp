#ifndef AQE_ERROR_HPP
#define AQE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace aqe {

// Error taxonomy shared by all modules and mirrored by the C API status codes.
enum class ErrorCode {
    Ok = 0,
    Pole,
    Domain,
    NotInjective,
    Resolution,
    NoConvergence,
    IllConditioned,
    Truncation,
    CoefficientShortfall,
    ConductorTooLarge,
    UnramifiedOnly,
    NotFundamental,
    ZeroOnBoundary,
    NonIntegerWinding,
    TailDivergence,
    NearPole,
    IncompleteCatalog,
    MissingField,
    EmptyFamily,
    SchemaVersion,
    Io,
    UnsupportedPoleOrder,
    Usage,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

#define AQE_DEFINE_ERROR(Name)                                   \
    class Name##Error : public Error {                          \
    public:                                                      \
        explicit Name##Error(const std::string& what)            \
            : Error(ErrorCode::Name, what) {}                    \
    }

AQE_DEFINE_ERROR(Pole);
AQE_DEFINE_ERROR(Domain);
AQE_DEFINE_ERROR(NotInjective);
AQE_DEFINE_ERROR(Resolution);
AQE_DEFINE_ERROR(NoConvergence);
AQE_DEFINE_ERROR(IllConditioned);
AQE_DEFINE_ERROR(Truncation);
AQE_DEFINE_ERROR(CoefficientShortfall);
AQE_DEFINE_ERROR(ConductorTooLarge);
AQE_DEFINE_ERROR(UnramifiedOnly);
AQE_DEFINE_ERROR(NotFundamental);
AQE_DEFINE_ERROR(ZeroOnBoundary);
AQE_DEFINE_ERROR(NonIntegerWinding);
AQE_DEFINE_ERROR(TailDivergence);
AQE_DEFINE_ERROR(NearPole);
AQE_DEFINE_ERROR(IncompleteCatalog);
AQE_DEFINE_ERROR(MissingField);
AQE_DEFINE_ERROR(EmptyFamily);
AQE_DEFINE_ERROR(SchemaVersion);
AQE_DEFINE_ERROR(Io);
AQE_DEFINE_ERROR(UnsupportedPoleOrder);

#undef AQE_DEFINE_ERROR

} // namespace aqe

#endif
