package fixture

// Stack is a LIFO container of ints.
type Stack struct {
	items []int
}

// Push places v on top of the stack.
func (s *Stack) Push(v int) {
	s.items = append(s.items, v)
}

// Pop removes and returns the top value.
// The second result reports whether a value was present.
func (s *Stack) Pop() (int, bool) {
	if len(s.items) == 0 {
		return 0, false
	}
	v := s.items[len(s.items)-1]
	s.items = s.items[:len(s.items)-1]
	return v, true
}

func (s *Stack) Len() int { return len(s.items) }

// NewStack returns an empty stack.
func NewStack() *Stack {
	return &Stack{}
}
