function start() {
  step1();
}

function step1() {
  step2();
}

function step2() {
  total += 1;
  return total;
}

function unusedA() {
  return step2();
}

function unusedB() {
  unusedA();
}

var total = 0;
start();
