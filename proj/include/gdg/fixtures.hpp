// Built-in presentations used by the CLI `fixtures` command and the tests.
#pragma once

#include "gdg/quiver.hpp"

#include <string>

namespace gdg::fixtures {

// Kronecker (alpha, beta): 1 -> 2 with alpha+- and beta+- around it.
// `kdeg` is the common degree of alpha and beta.
Presentation lambda1(int kdeg = 0);
// Pinching of lambda1 at (alpha, beta): merged vertex 1 with loop gamma.
Presentation lambda1_pinched();
// Six vertices, arrows a..f, one relation d c.
Presentation lambda0();
// Bare Kronecker quiver 1 => 2.
Presentation kronecker();
// 1 -> 2 -> 3 without relations.
Presentation a3();

} // namespace gdg::fixtures
