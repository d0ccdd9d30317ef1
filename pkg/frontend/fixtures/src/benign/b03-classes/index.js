class Shape {
  constructor(name) { this.name = name; }
  get label() { return 'shape:' + this.name; }
  area() { return 0; }
}
class Rect extends Shape {
  constructor(w, h) { super('rect'); this.w = w; this.h = h; }
  area() { return this.w * this.h; }
  static unit() { return new Rect(1, 1); }
}
var r = new Rect(3, 4);
console.log(r.label, r.area(), Rect.unit().area(), r instanceof Shape);
