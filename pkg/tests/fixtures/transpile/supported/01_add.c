None add(None a, None b) {
    return a + b;
}
