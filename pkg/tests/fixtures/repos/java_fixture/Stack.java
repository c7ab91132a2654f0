package fixture;

/** Array-backed stack of ints. */
public class Stack {
    private int[] data = new int[8];
    private int top = 0;

    /** Creates an empty stack. */
    public Stack() {
        this.top = 0;
    }

    /**
     * Pushes a value on the stack.
     * @param v value to store
     */
    public void push(int v) {
        if (top == data.length) {
            grow();
        }
        data[top++] = v;
    }

    public int pop() {
        return data[--top];
    }

    private void grow() {
        data = java.util.Arrays.copyOf(data, data.length * 2);
    }

    /** Iterator over live elements. */
    static class Cursor {
        private final Stack owner;
        private int index = 0;

        Cursor(Stack owner) {
            this.owner = owner;
        }

        /** True when another element remains. */
        boolean hasNext() {
            return index < owner.top;
        }
    }
}
