#include "scriptcausal/errors.hpp"

namespace scriptcausal {

void throw_invalid(const std::string& what) { throw InvalidArgument(what); }
void throw_format(const std::string& what) { throw FormatError(what); }
void throw_numerical(const std::string& what) { throw NumericalError(what); }

}  // namespace scriptcausal
