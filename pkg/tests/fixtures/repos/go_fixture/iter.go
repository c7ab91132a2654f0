package fixture

// Each applies fn to every element of xs.
func Each(xs []int, fn func(int)) {
	for _, x := range xs {
		fn(x)
	}
}

func sumAll(xs []int) int {
	adder := func(a, b int) int {
		return a + b
	}
	total := 0
	for _, x := range xs {
		total = adder(total, x)
	}
	return total
}
