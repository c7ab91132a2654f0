None churn(None x, None y) {
    x += y;
    x -= 1;
    x *= 2;
    x /= y;
    x %= 7;
    return x;
}
