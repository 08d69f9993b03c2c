#pragma once

#include <stdexcept>
#include <string>

namespace flatsteer {

// Library errors carry a short slug (stable, machine-checkable) plus detail.
class Error : public std::runtime_error {
  public:
    Error(std::string slug, const std::string& detail)
        : std::runtime_error(slug + ": " + detail), slug_(std::move(slug)) {}
    const std::string& slug() const { return slug_; }

  private:
    std::string slug_;
};

[[noreturn]] inline void fail(const std::string& slug, const std::string& detail) {
    throw Error(slug, detail);
}

}  // namespace flatsteer
