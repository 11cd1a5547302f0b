#ifndef AQE_MAASS_FWD_HPP
#define AQE_MAASS_FWD_HPP

namespace aqe::maass {
struct MaassForm;
}

#endif
