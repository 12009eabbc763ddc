class Shape {
  constructor(w, h) {
    this.w = w;
    this.h = h;
  }
  area() {
    return this.w * this.h;
  }
  perimeter() {
    return 2 * (this.w + this.h);
  }
  describe() {
    return 'shape ' + this.area();
  }
}

function build() {
  return new Shape(2, 3);
}

var s = build();
s.area();
