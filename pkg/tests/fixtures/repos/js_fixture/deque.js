"use strict";

// Deque implemented over a plain array.
function Deque(values) {
    this.items = values || [];
}

// Adds a value at the back.
Deque.prototype.push = function (value) {
    this.items.push(value);
};

Deque.prototype.shift = function () {
    return this.items.shift();
};

// Largest stored value, or null when empty.
var maxOf = function (deque) {
    if (deque.items.length === 0) {
        return null;
    }
    return Math.max.apply(null, deque.items);
};

const isEmpty = (deque) => {
    return deque.items.length === 0;
};

var helpers = {
    // Number of stored items.
    size: function (deque) {
        return deque.items.length;
    }
};

function outerPlan(n) {
    function step(k) {
        return k + 1;
    }
    return step(n);
}
