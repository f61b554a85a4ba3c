#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace stlc {

/// Immutable singly linked list with structural sharing.
///
/// `push_front` is O(1) and never copies the tail, so many lists may share
/// a common suffix. Environments and evaluation contexts are both built on
/// this: extending an environment or pushing an argument frame leaves every
/// other holder of the old list untouched.
template <typename T>
class PList {
  struct Cell {
    T head;
    PList tail;
    std::size_t size;
  };

 public:
  PList() = default;

  [[nodiscard]] bool empty() const noexcept { return cell_ == nullptr; }
  [[nodiscard]] std::size_t size() const noexcept { return cell_ ? cell_->size : 0; }

  [[nodiscard]] const T& front() const {
    if (!cell_) throw std::out_of_range("PList::front on empty list");
    return cell_->head;
  }

  [[nodiscard]] const PList& pop_front() const {
    if (!cell_) throw std::out_of_range("PList::pop_front on empty list");
    return cell_->tail;
  }

  [[nodiscard]] PList push_front(T value) const {
    PList out;
    out.cell_ = std::make_shared<Cell>(Cell{std::move(value), *this, size() + 1});
    return out;
  }

  /// Element at position `i` counting from the front; O(i).
  [[nodiscard]] const T& at(std::size_t i) const {
    const PList* cur = this;
    while (i > 0) {
      if (!cur->cell_) break;
      cur = &cur->cell_->tail;
      --i;
    }
    if (!cur->cell_) throw std::out_of_range("PList::at index out of range");
    return cur->cell_->head;
  }

  /// True when both lists are the very same cells (not merely equal).
  [[nodiscard]] bool same_cells(const PList& other) const noexcept {
    return cell_ == other.cell_;
  }

  [[nodiscard]] std::vector<T> to_vector() const {
    std::vector<T> out;
    out.reserve(size());
    for (const T& x : *this) out.push_back(x);
    return out;
  }

  /// Builds a list whose front is `items.front()`.
  static PList from_vector(const std::vector<T>& items) {
    PList out;
    for (auto it = items.rbegin(); it != items.rend(); ++it) out = out.push_front(*it);
    return out;
  }

  class iterator {
   public:
    using value_type = T;
    using difference_type = std::ptrdiff_t;
    using reference = const T&;
    using pointer = const T*;
    using iterator_category = std::forward_iterator_tag;

    iterator() = default;
    explicit iterator(const Cell* c) : cell_(c) {}
    reference operator*() const { return cell_->head; }
    pointer operator->() const { return &cell_->head; }
    iterator& operator++() {
      cell_ = cell_->tail.cell_.get();
      return *this;
    }
    iterator operator++(int) {
      iterator tmp = *this;
      ++*this;
      return tmp;
    }
    bool operator==(const iterator&) const = default;

   private:
    const Cell* cell_ = nullptr;
  };

  [[nodiscard]] iterator begin() const { return iterator(cell_.get()); }
  [[nodiscard]] iterator end() const { return iterator(); }

  ~PList() {
    // Unlink uniquely owned cells iteratively so long lists do not recurse.
    while (cell_ && cell_.use_count() == 1) {
      auto next = std::move(cell_->tail.cell_);
      cell_ = std::move(next);
    }
  }
  PList(const PList&) = default;
  PList(PList&&) noexcept = default;
  PList& operator=(const PList&) = default;
  PList& operator=(PList&&) noexcept = default;

 private:
  // Mutated only by the destructor, once no other list can observe it.
  std::shared_ptr<Cell> cell_;
};

}  // namespace stlc
