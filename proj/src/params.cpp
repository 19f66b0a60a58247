#include "conjlab/params.hpp"

#include <cmath>
#include <string>

#include "conjlab/errors.hpp"

namespace conjlab {

Form form_from_int(int tag) {
  switch (tag) {
    case 1:
      return Form::kForm1;
    case 2:
      return Form::kForm2;
    case 3:
      return Form::kForm3;
    default:
      throw DomainError("unknown formulation tag " + std::to_string(tag));
  }
}

std::string_view form_name(Form form) {
  switch (form) {
    case Form::kForm1:
      return "FORM1";
    case Form::kForm2:
      return "FORM2";
    case Form::kForm3:
      return "FORM3";
  }
  return "?";
}

Params Params::from_lambda(double lambda, int n) {
  if (!std::isfinite(lambda) || lambda <= 0.0) throw DomainError("lambda must be finite and positive");
  if (n < 2) throw DomainError("n must be an integer >= 2");
  return Params(lambda, n);
}

Params Params::from_alpha(double alpha, int n) {
  if (!std::isfinite(alpha) || alpha <= 0.0) throw DomainError("alpha must be finite and positive");
  return from_lambda(2.0 * alpha, n);
}

double Params::rate(Form form) const noexcept {
  switch (form) {
    case Form::kForm1:
      return lambda();
    case Form::kForm2:
      return alpha();
    case Form::kForm3:
      return alpha() - 1.0;
  }
  return 0.0;
}

bool Params::valid_for(Form form) const noexcept {
  return form == Form::kForm1 ? lambda() >= 0.5 : alpha() > 0.5;
}

void Params::require(Form form) const {
  if (valid_for(form)) return;
  if (form == Form::kForm1) throw DomainError("FORM1 requires lambda >= 1/2");
  throw DomainError(std::string(form_name(form)) + " requires alpha > 1/2");
}

}  // namespace conjlab
