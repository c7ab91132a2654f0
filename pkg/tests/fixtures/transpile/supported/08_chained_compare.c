None in_range(None x) {
    return (0 < x) && (x < 10);
}
