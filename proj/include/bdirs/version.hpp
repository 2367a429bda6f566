#ifndef BDIRS_VERSION_HPP
#define BDIRS_VERSION_HPP

namespace bdirs {

inline constexpr const char *kToolVersion = "0.1.0";

} // namespace bdirs

#endif // BDIRS_VERSION_HPP
