#pragma once

#include <memory>
#include <utility>

namespace viewshift {

// Heap-allocated value with deep-copy semantics; lets recursive AST nodes
// behave like ordinary values.
template <typename T>
class Box {
public:
  Box() : ptr_(std::make_unique<T>()) {}
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&& other) noexcept = default;

  Box& operator=(const Box& other) {
    if (this == &other) return *this;
    if (ptr_)
      *ptr_ = *other.ptr_;
    else
      ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&& other) noexcept = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }
  T* get() { return ptr_.get(); }
  const T* get() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

private:
  std::unique_ptr<T> ptr_;
};

}  // namespace viewshift
