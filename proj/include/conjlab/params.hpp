#pragma once

#include <string_view>

namespace conjlab {

// The three equivalent statements: S with rate lambda (FORM1), increasing h
// with rate alpha (FORM2), and q = h' with rate alpha - 1 (FORM3).
enum class Form { kForm1 = 1, kForm2 = 2, kForm3 = 3 };

Form form_from_int(int tag);
std::string_view form_name(Form form);

// Rate parameter and dimension. Only lambda is stored; alpha = lambda / 2.
class Params {
 public:
  static Params from_lambda(double lambda, int n);
  static Params from_alpha(double alpha, int n);

  double lambda() const noexcept { return lambda_; }
  double alpha() const noexcept { return lambda_ / 2.0; }
  int n() const noexcept { return n_; }

  // Growth exponent of the admissible right side of the constraint.
  double rate(Form form) const noexcept;

  // FORM1 requires lambda >= 1/2, FORM2 and FORM3 require alpha > 1/2.
  bool valid_for(Form form) const noexcept;
  void require(Form form) const;

  friend bool operator==(const Params&, const Params&) = default;

 private:
  Params(double lambda, int n) : lambda_(lambda), n_(n) {}
  double lambda_;
  int n_;
};

}  // namespace conjlab
