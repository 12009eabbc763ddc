function makeCounter() {
  var n = 0;
  function bump() {
    n += 1;
    return n;
  }
  return bump;
}

function makeLogger() {
  function fmt(x) {
    return '[' + x + ']';
  }
  function write(x) {
    return fmt(x);
  }
  return write;
}

function deadOuter() {
  function deadInner() {
    return 1;
  }
  return deadInner;
}

var counter = makeCounter();
counter();
counter();
