#ifndef BRIDGEHACK_LOG_HPP_
#define BRIDGEHACK_LOG_HPP_

#include <string>

namespace bridgehack {

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

// Level comes from BRIDGEHACK_LOG (quiet|info|debug), read once. Default is
// quiet so library users see nothing unless they ask.
LogLevel log_level();

void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace bridgehack

#endif  // BRIDGEHACK_LOG_HPP_
