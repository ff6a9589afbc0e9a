#include "conceptmine/log.hpp"

#include <iostream>
#include <mutex>

namespace conceptmine {

namespace {
std::mutex g_mu;
WarningSink g_sink;
}  // namespace

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard lock(g_mu);
  std::swap(g_sink, sink);
  return sink;
}

void warn(const std::string& message) {
  std::lock_guard lock(g_mu);
  if (g_sink) {
    g_sink(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

}  // namespace conceptmine
